#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rfsc/errors.hpp"
#include "rfsc/sigproc/trace.hpp"

namespace rfsc {

// Payload: raw little-endian int16, one channel. Metadata lives in a JSON
// sidecar at <path>.json. Reconstruction is sample = raw * scale.
struct TraceSidecar {
  double sample_rate_hz = 0.0;
  double start_time_s = 0.0;
  double scale = 1.0;
  std::string description;
  std::uint64_t n_samples = 0;
  bool truncated = false;
  std::uint64_t clipped = 0;
};

inline nlohmann::json sidecar_to_json(const TraceSidecar& s) {
  return nlohmann::json{{"sample_rate_hz", s.sample_rate_hz},
                        {"start_time_s", s.start_time_s},
                        {"scale", s.scale},
                        {"description", s.description},
                        {"n_samples", s.n_samples},
                        {"truncated", s.truncated},
                        {"clipped", s.clipped}};
}

inline TraceSidecar sidecar_from_json(const nlohmann::json& j) {
  TraceSidecar s;
  s.sample_rate_hz = j.at("sample_rate_hz").get<double>();
  s.start_time_s = j.value("start_time_s", 0.0);
  s.scale = j.value("scale", 1.0);
  s.description = j.value("description", std::string{});
  s.n_samples = j.value("n_samples", std::uint64_t{0});
  s.truncated = j.value("truncated", false);
  s.clipped = j.value("clipped", std::uint64_t{0});
  if (s.sample_rate_hz <= 0.0)
    throw IoError("sidecar: sample_rate_hz must be positive");
  return s;
}

namespace detail {

inline void append_i16le(std::vector<std::uint8_t>& out, std::int16_t v) {
  const auto u = static_cast<std::uint16_t>(v);
  out.push_back(static_cast<std::uint8_t>(u & 0xff));
  out.push_back(static_cast<std::uint8_t>(u >> 8));
}

inline std::int16_t read_i16le(const std::uint8_t* p) {
  return static_cast<std::int16_t>(
      static_cast<std::uint16_t>(p[0]) |
      (static_cast<std::uint16_t>(p[1]) << 8));
}

}  // namespace detail

struct WriteResult {
  double scale = 1.0;
  std::uint64_t clipped = 0;
};

// Quantize and persist. Default scale maps the largest |sample| to 32767;
// an all-zero trace gets scale 1. A caller-forced scale may clip, the clip
// count lands in the result and the sidecar.
inline WriteResult write_trace(const SampleTrace& trace, const std::string& path,
                               const std::string& description = "",
                               std::optional<double> forced_scale = {},
                               bool truncated = false) {
  validate(trace);

  double max_abs = 0.0;
  for (double v : trace.samples) max_abs = std::max(max_abs, std::fabs(v));
  double scale;
  if (forced_scale) {
    if (*forced_scale <= 0.0) throw ConfigInvalid("scale must be positive");
    scale = *forced_scale;
  } else {
    scale = max_abs > 0.0 ? max_abs / 32767.0 : 1.0;
  }

  std::vector<std::uint8_t> payload;
  payload.reserve(trace.samples.size() * 2);
  std::uint64_t clipped = 0;
  for (double v : trace.samples) {
    double q = std::round(v / scale);
    if (q > 32767.0) {
      q = 32767.0;
      ++clipped;
    } else if (q < -32768.0) {
      q = -32768.0;
      ++clipped;
    }
    detail::append_i16le(payload, static_cast<std::int16_t>(q));
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out.write(reinterpret_cast<const char*>(payload.data()),
            static_cast<std::streamsize>(payload.size()));
  if (!out) throw IoError("short write on " + path);
  out.close();

  TraceSidecar side;
  side.sample_rate_hz = trace.sample_rate_hz;
  side.start_time_s = trace.start_time_s;
  side.scale = scale;
  side.description = description;
  side.n_samples = trace.samples.size();
  side.truncated = truncated;
  side.clipped = clipped;
  std::ofstream meta(path + ".json", std::ios::binary);
  if (!meta) throw IoError("cannot write " + path + ".json");
  meta << sidecar_to_json(side).dump(2) << '\n';
  if (!meta) throw IoError("short write on " + path + ".json");
  return {scale, clipped};
}

inline TraceSidecar read_sidecar(const std::string& trace_path) {
  std::ifstream meta(trace_path + ".json", std::ios::binary);
  if (!meta) throw IoError("missing sidecar: " + trace_path + ".json");
  nlohmann::json j;
  try {
    meta >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("invalid sidecar JSON: " + std::string(e.what()));
  }
  return sidecar_from_json(j);
}

inline SampleTrace read_trace(const std::string& path,
                              TraceSidecar* sidecar_out = nullptr) {
  const TraceSidecar side = read_sidecar(path);

  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (bytes.size() % 2 != 0)
    throw IoError("payload has an odd byte count: " + path);
  const std::uint64_t n = bytes.size() / 2;
  if (side.n_samples != 0 && side.n_samples != n)
    throw IoError("payload length disagrees with sidecar: " + path);

  SampleTrace trace;
  trace.sample_rate_hz = side.sample_rate_hz;
  trace.start_time_s = side.start_time_s;
  trace.samples.resize(n);
  for (std::uint64_t i = 0; i < n; ++i)
    trace.samples[i] =
        static_cast<double>(detail::read_i16le(bytes.data() + 2 * i)) *
        side.scale;
  if (sidecar_out) *sidecar_out = side;
  return trace;
}

}  // namespace rfsc
