#pragma once

// Umbrella header: the complete framelab toolkit.

#include "classification.hpp"
#include "cstar_frames.hpp"
#include "errors.hpp"
#include "hilbert_frames.hpp"
#include "json_io.hpp"
#include "linalg.hpp"
#include "measure.hpp"
#include "module_frames.hpp"
#include "polynomial.hpp"
#include "rng.hpp"
#include "scalar.hpp"
#include "translates.hpp"
