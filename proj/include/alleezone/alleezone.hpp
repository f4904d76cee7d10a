#pragma once

// Principal-eigenvalue analysis and time-domain simulation of a 1-D
// reaction-diffusion habitat with a protection zone.

#include "alleezone/baseline.hpp"
#include "alleezone/design.hpp"
#include "alleezone/eigen.hpp"
#include "alleezone/errors.hpp"
#include "alleezone/fd_oracle.hpp"
#include "alleezone/model.hpp"
#include "alleezone/pde.hpp"
#include "alleezone/sensitivity.hpp"
#include "alleezone/transfer.hpp"

namespace alleezone {
inline constexpr const char* kVersion = "0.1.0";
}
