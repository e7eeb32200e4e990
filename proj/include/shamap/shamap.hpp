#pragma once

#include "shamap/angles.hpp"
#include "shamap/dataset.hpp"
#include "shamap/error.hpp"
#include "shamap/graph.hpp"
#include "shamap/ingest.hpp"
#include "shamap/matrix.hpp"
#include "shamap/metrics.hpp"
#include "shamap/parallel.hpp"
#include "shamap/pipeline.hpp"
#include "shamap/rng.hpp"
#include "shamap/spectral.hpp"
#include "shamap/svg.hpp"
#include "shamap/synth.hpp"
