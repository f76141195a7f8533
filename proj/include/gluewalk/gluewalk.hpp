#pragma once

#include "gluewalk/channel.hpp"
#include "gluewalk/coin.hpp"
#include "gluewalk/csv.hpp"
#include "gluewalk/experiment.hpp"
#include "gluewalk/graph.hpp"
#include "gluewalk/parallel.hpp"
#include "gluewalk/walk.hpp"

namespace gluewalk {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace gluewalk
