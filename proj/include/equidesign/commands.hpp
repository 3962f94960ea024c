#pragma once

#include "equidesign/io.hpp"

namespace equidesign {

// Exit codes: 0 success, 2 solver failure, 3 optimizer abort,
// 1 failed validation items.
int cmd_forward(const RunConfig& cfg);
int cmd_optimize(const RunConfig& cfg);
int cmd_gradcheck(const RunConfig& cfg);
int cmd_validate(const RunConfig& cfg);

}  // namespace equidesign
