#pragma once

// Umbrella header.

#include "rfsc/errors.hpp"
#include "rfsc/io/stream.hpp"
#include "rfsc/io/trace_file.hpp"
#include "rfsc/recon/baseline.hpp"
#include "rfsc/recon/classify.hpp"
#include "rfsc/recon/pipeline.hpp"
#include "rfsc/recon/report.hpp"
#include "rfsc/recon/shots.hpp"
#include "rfsc/recon/stats.hpp"
#include "rfsc/recon/unitary.hpp"
#include "rfsc/sigproc/alias.hpp"
#include "rfsc/sigproc/components.hpp"
#include "rfsc/sigproc/fft.hpp"
#include "rfsc/sigproc/pulse.hpp"
#include "rfsc/sigproc/stft.hpp"
#include "rfsc/sigproc/threshold.hpp"
#include "rfsc/sigproc/trace.hpp"
#include "rfsc/sim/circuit.hpp"
#include "rfsc/sim/emission.hpp"
#include "rfsc/sim/rng.hpp"
#include "rfsc/sim/synth.hpp"
