#pragma once

#include "noverlap/algorithms/adjust.hpp"
#include "noverlap/bench.hpp"
#include "noverlap/catalog.hpp"
#include "noverlap/config.hpp"
#include "noverlap/corpus.hpp"
#include "noverlap/geometry.hpp"
#include "noverlap/io.hpp"
#include "noverlap/metrics.hpp"
#include "noverlap/model.hpp"
#include "noverlap/record.hpp"
