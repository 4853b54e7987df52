#pragma once

#include "core.hpp"
#include "units.hpp"
#include "oracle.hpp"
#include "propagators.hpp"
#include "wave_optics.hpp"
#include "refraction.hpp"
#include "ray_optics.hpp"
#include "reflection.hpp"
#include "michelson.hpp"
#include "flavour.hpp"
