#pragma once

#include "mcwave/analysis.hpp"
#include "mcwave/fft.hpp"
#include "mcwave/filter.hpp"
#include "mcwave/harness.hpp"
#include "mcwave/io.hpp"
#include "mcwave/modem.hpp"
#include "mcwave/psd.hpp"
#include "mcwave/rng.hpp"
#include "mcwave/scenarios.hpp"
#include "mcwave/sweep.hpp"
#include "mcwave/types.hpp"
#include "mcwave/uplink.hpp"
#include "mcwave/waveform.hpp"
