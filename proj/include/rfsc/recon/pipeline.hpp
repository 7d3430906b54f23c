#pragma once

#include <optional>
#include <vector>

#include "rfsc/recon/baseline.hpp"
#include "rfsc/recon/classify.hpp"
#include "rfsc/recon/shots.hpp"
#include "rfsc/recon/stats.hpp"
#include "rfsc/sigproc/components.hpp"
#include "rfsc/sigproc/pulse.hpp"
#include "rfsc/sigproc/stft.hpp"
#include "rfsc/sigproc/threshold.hpp"
#include "rfsc/sigproc/trace.hpp"

namespace rfsc {

struct AnalyzeOptions {
  StftConfig stft{};
  double alpha = 4.0;
  std::size_t min_cells = 1;
  double gap_threshold_s = 1e-3;
  AddressingTable table = AddressingTable::defaults();
  ClassifyConfig classify{};
};

struct AnalysisResult {
  Spectrogram spectrogram;
  ThresholdStats threshold;
  std::vector<Component> components;
  std::vector<Pulse> pulses;
  std::vector<Shot> shots;
  std::vector<std::vector<GateEvent>> events;  // parallel to shots
  StatsTable stats;
};

// Full chain: spectrogram, threshold mask, connected components, pulses,
// shots, region labels, gate classification, per-ion statistics. Without a
// baseline profile every pulse is treated as region B.
inline AnalysisResult analyze_trace(const SampleTrace& trace,
                                    const AnalyzeOptions& opt = {},
                                    const BaselineProfile* profile = nullptr) {
  AnalysisResult r;
  r.spectrogram = compute_stft(trace, opt.stft);
  r.threshold = compute_threshold(r.spectrogram, opt.alpha);
  const DetectionMask mask = apply_threshold(r.spectrogram, r.threshold);
  r.components = label_components(mask, opt.min_cells);
  r.pulses = extract_pulses(r.spectrogram, r.components);
  r.shots = segment_shots(r.pulses, opt.gap_threshold_s);

  for (Shot& s : r.shots) {
    if (profile && !profile->empty()) {
      s = label_regions(std::move(s), *profile);
    } else {
      s.region_labels.assign(s.pulses.size(), Region::B);
    }
    r.events.push_back(classify_gates(s, opt.table, opt.classify));
  }
  r.stats = aggregate_stats(r.events);
  return r;
}

}  // namespace rfsc
