#pragma once

#include "robin/oracles.hpp"

namespace robin::testing {
using oracles::brute_force_parabolic;
using oracles::random_tuple;
}  // namespace robin::testing
