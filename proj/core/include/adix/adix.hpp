#pragma once

#include "adix/active_real.hpp"
#include "adix/adjoint_vector.hpp"
#include "adix/identifier.hpp"
#include "adix/index_manager.hpp"
#include "adix/jacobian_tape.hpp"
#include "adix/stats.hpp"
