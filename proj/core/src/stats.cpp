#include "adix/stats.hpp"

#include <array>
#include <charconv>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>

namespace adix {

namespace {

void append_number(std::string& out, std::uint64_t value) {
  std::array<char, 32> buffer{};
  auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  out.append(buffer.data(), end);
}

void append_number(std::string& out, double value) {
  std::array<char, 64> buffer{};
  auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  out.append(buffer.data(), end);
}

template <class T>
T parse_field(std::string_view field, std::size_t line) {
  T value{};
  auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || end != field.data() + field.size()) {
    throw std::invalid_argument("csv: malformed number '" + std::string(field) + "' on line " +
                                std::to_string(line));
  }
  return value;
}

std::vector<std::string_view> split(std::string_view row, char separator) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = row.find(separator, start);
    if (pos == std::string_view::npos) {
      fields.push_back(row.substr(start));
      break;
    }
    fields.push_back(row.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

}  // namespace

MemoryModelBreakdown memory_model_breakdown(ManagerKind kind, const MemoryModelInputs& in) {
  MemoryModelBreakdown m;
  switch (kind) {
    case ManagerKind::linear:
      m.adjoint_entries = in.s_a + in.s_i;
      m.identifier_bytes = 0;
      break;
    case ManagerKind::reuse:
      m.adjoint_entries = in.i_max;
      m.identifier_bytes = kIdentifierBytes * (in.s_a + in.s_c);
      break;
    case ManagerKind::use_count:
      m.adjoint_entries = in.i_max;
      m.identifier_bytes = kIdentifierBytes * in.s_a + kIdentifierBytes * in.i_max;
      break;
  }
  m.adjoint_bytes = kAdjointEntryBytes * m.adjoint_entries * in.d;
  return m;
}

MemoryModelInputs TapeReport::model_inputs() const {
  return {.s_a = s_a + s_o, .s_c = s_c, .s_i = s_i, .i_max = i_max, .d = d};
}

CsvRecord to_csv_record(const TapeReport& report) {
  return {.manager = to_string(report.manager),
          .s_a = report.s_a,
          .s_c = report.s_c,
          .s_i = report.s_i,
          .i_max = report.i_max,
          .d = report.d,
          .adjoint_bytes = report.adjoint_bytes,
          .statement_bytes = report.statement_bytes,
          .argument_bytes = report.argument_bytes,
          .model_bytes = report.model.total(),
          .record_seconds = report.record_seconds,
          .reverse_seconds = report.reverse_seconds};
}

std::string render_csv(std::span<const CsvRecord> records) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const CsvRecord& r : records) {
    out += r.manager;
    for (std::uint64_t v : {r.s_a, r.s_c, r.s_i, r.i_max, r.d, r.adjoint_bytes, r.statement_bytes, r.argument_bytes,
                            r.model_bytes}) {
      out += ',';
      append_number(out, v);
    }
    out += ',';
    append_number(out, r.record_seconds);
    out += ',';
    append_number(out, r.reverse_seconds);
    out += '\n';
  }
  return out;
}

std::string render_csv(std::span<const TapeReport> reports) {
  std::vector<CsvRecord> records;
  records.reserve(reports.size());
  for (const TapeReport& r : reports) {
    records.push_back(to_csv_record(r));
  }
  return render_csv(std::span<const CsvRecord>(records));
}

std::vector<CsvRecord> parse_csv(std::string_view text) {
  std::vector<CsvRecord> records;
  std::size_t line = 0;
  bool header_seen = false;
  while (!text.empty()) {
    const std::size_t eol = text.find('\n');
    std::string_view row = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    line += 1;
    if (!row.empty() && row.back() == '\r') {
      row.remove_suffix(1);
    }
    if (row.empty()) {
      continue;
    }
    if (!header_seen) {
      if (row != kCsvHeader) {
        throw std::invalid_argument("csv: unexpected header");
      }
      header_seen = true;
      continue;
    }
    const auto fields = split(row, ',');
    if (fields.size() != 12) {
      throw std::invalid_argument("csv: expected 12 columns on line " + std::to_string(line));
    }
    CsvRecord r;
    r.manager = std::string(fields[0]);
    r.s_a = parse_field<std::uint64_t>(fields[1], line);
    r.s_c = parse_field<std::uint64_t>(fields[2], line);
    r.s_i = parse_field<std::uint64_t>(fields[3], line);
    r.i_max = parse_field<std::uint64_t>(fields[4], line);
    r.d = parse_field<std::uint64_t>(fields[5], line);
    r.adjoint_bytes = parse_field<std::uint64_t>(fields[6], line);
    r.statement_bytes = parse_field<std::uint64_t>(fields[7], line);
    r.argument_bytes = parse_field<std::uint64_t>(fields[8], line);
    r.model_bytes = parse_field<std::uint64_t>(fields[9], line);
    r.record_seconds = parse_field<double>(fields[10], line);
    r.reverse_seconds = parse_field<double>(fields[11], line);
    records.push_back(std::move(r));
  }
  if (!header_seen) {
    throw std::invalid_argument("csv: missing header");
  }
  return records;
}

std::string render_table(std::span<const TapeReport> reports) {
  std::ostringstream out;
  out << std::left << std::setw(10) << "manager" << std::right << std::setw(12) << "s_a" << std::setw(10) << "s_c"
      << std::setw(10) << "s_i" << std::setw(10) << "i_max" << std::setw(4) << "d" << std::setw(12) << "statements"
      << std::setw(14) << "adjoint B" << std::setw(14) << "statement B" << std::setw(14) << "argument B"
      << std::setw(14) << "index B" << std::setw(14) << "model B" << std::setw(11) << "record s" << std::setw(11)
      << "reverse s" << '\n';
  for (const TapeReport& r : reports) {
    out << std::left << std::setw(10) << to_string(r.manager) << std::right << std::setw(12) << r.s_a << std::setw(10)
        << r.s_c << std::setw(10) << r.s_i << std::setw(10) << r.i_max << std::setw(4) << r.d << std::setw(12)
        << r.statement_entries << std::setw(14) << r.adjoint_bytes << std::setw(14) << r.statement_bytes
        << std::setw(14) << r.argument_bytes << std::setw(14) << r.identifier_bytes << std::setw(14)
        << r.model.total() << std::setw(11) << std::fixed << std::setprecision(5) << r.record_seconds
        << std::setw(11) << r.reverse_seconds << '\n';
    out.unsetf(std::ios::fixed);
  }
  for (const TapeReport& r : reports) {
    const std::uint64_t measured = r.adjoint_bytes + r.identifier_bytes;
    out << to_string(r.manager) << ": model " << r.model.total() << " B vs measured " << measured
        << " B (adjoint + index); fixed overhead " << r.fixed_overhead_bytes << " B";
    if (r.manager == ManagerKind::use_count && r.s_o != 0) {
      out << "; " << r.s_o << " output uniquification statement(s)";
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace adix
