#pragma once

#include "mrgg/envelope.hpp"
#include "mrgg/error.hpp"
#include "mrgg/experiments.hpp"
#include "mrgg/harmonics.hpp"
#include "mrgg/inference.hpp"
#include "mrgg/io.hpp"
#include "mrgg/latent.hpp"
#include "mrgg/latitude.hpp"
#include "mrgg/parallel.hpp"
#include "mrgg/quadrature.hpp"
#include "mrgg/rng.hpp"
#include "mrgg/spectral.hpp"
#include "mrgg/svg.hpp"
