#pragma once

#include "aircomp/adaptive.hpp"
#include "aircomp/analysis.hpp"
#include "aircomp/channel.hpp"
#include "aircomp/core.hpp"
#include "aircomp/detector.hpp"
#include "aircomp/harness.hpp"
#include "aircomp/modem.hpp"
#include "aircomp/rng.hpp"
