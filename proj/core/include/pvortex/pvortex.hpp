#pragma once

#include "pvortex/domain.hpp"
#include "pvortex/dynamics.hpp"
#include "pvortex/error.hpp"
#include "pvortex/flow.hpp"
#include "pvortex/geometry.hpp"
#include "pvortex/levelset.hpp"
#include "pvortex/orbits.hpp"
#include "pvortex/serialize.hpp"
#include "pvortex/twist.hpp"
