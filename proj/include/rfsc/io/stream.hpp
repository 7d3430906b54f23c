#pragma once

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstring>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "rfsc/errors.hpp"
#include "rfsc/io/trace_file.hpp"

namespace rfsc {

// Wire protocol, all integers little-endian:
//   handshake: one line of sidecar JSON terminated by '\n'
//   frames:    magic "RFSC" | seq u32 (0,1,2,...) | n_samples u32 <= 65536
//              | n_samples * int16 payload
// The server closes the connection after the last frame.
inline constexpr char kFrameMagic[4] = {'R', 'F', 'S', 'C'};
inline constexpr std::uint32_t kMaxFrameSamples = 65536;

namespace detail {

inline void put_u32le(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
  out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xff));
  out.push_back(static_cast<std::uint8_t>((v >> 24) & 0xff));
}

inline std::uint32_t get_u32le(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

inline bool send_all(int fd, const void* data, std::size_t len) {
  const char* p = static_cast<const char*>(data);
  while (len > 0) {
    const ssize_t n = ::send(fd, p, len, MSG_NOSIGNAL);
    if (n <= 0) return false;
    p += n;
    len -= static_cast<std::size_t>(n);
  }
  return true;
}

// 1 = got everything, 0 = clean EOF before the first byte, -1 = EOF midway
inline int recv_all(int fd, void* data, std::size_t len) {
  char* p = static_cast<char*>(data);
  std::size_t got = 0;
  while (got < len) {
    const ssize_t n = ::recv(fd, p + got, len - got, 0);
    if (n == 0) return got == 0 ? 0 : -1;
    if (n < 0) return got == 0 ? 0 : -1;
    got += static_cast<std::size_t>(n);
  }
  return 1;
}

struct FdGuard {
  int fd = -1;
  ~FdGuard() {
    if (fd >= 0) ::close(fd);
  }
  int release() {
    const int f = fd;
    fd = -1;
    return f;
  }
};

}  // namespace detail

// Replays a stored trace to one TCP client at a time.
class StreamServer {
 public:
  StreamServer(std::string trace_path, std::size_t samples_per_frame = 16384,
               bool realtime = false)
      : samples_per_frame_(samples_per_frame), realtime_(realtime) {
    if (samples_per_frame_ == 0 || samples_per_frame_ > kMaxFrameSamples)
      throw ConfigInvalid("samples_per_frame must be in [1, 65536]");
    sidecar_ = read_sidecar(trace_path);
    std::ifstream in(trace_path, std::ios::binary);
    if (!in) throw IoError("cannot open " + trace_path);
    payload_.assign((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
    if (payload_.size() % 2 != 0)
      throw IoError("payload has an odd byte count: " + trace_path);
  }

  void start(std::uint16_t port) {
    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listen_fd_ < 0) throw NetError("socket() failed");
    const int one = 1;
    ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = htons(port);
    if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0) {
      ::close(listen_fd_);
      listen_fd_ = -1;
      throw NetError("bind() failed on port " + std::to_string(port));
    }
    if (::listen(listen_fd_, 1) < 0) {
      ::close(listen_fd_);
      listen_fd_ = -1;
      throw NetError("listen() failed");
    }
    socklen_t len = sizeof(addr);
    ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    port_ = ntohs(addr.sin_port);
  }

  std::uint16_t port() const { return port_; }

  // Serve exactly one client session; returns false if stopped before a
  // client connected.
  bool serve_once() {
    const int client = ::accept(listen_fd_, nullptr, nullptr);
    if (client < 0) return false;
    detail::FdGuard guard{client};

    nlohmann::json hs = sidecar_to_json(sidecar_);
    hs["n_samples"] = payload_.size() / 2;
    const std::string line = hs.dump() + "\n";
    if (!detail::send_all(client, line.data(), line.size())) return true;

    const std::size_t total = payload_.size() / 2;
    std::uint32_t seq = 0;
    for (std::size_t off = 0; off < total; off += samples_per_frame_) {
      const std::size_t n = std::min(samples_per_frame_, total - off);
      std::vector<std::uint8_t> header;
      header.insert(header.end(), kFrameMagic, kFrameMagic + 4);
      detail::put_u32le(header, seq++);
      detail::put_u32le(header, static_cast<std::uint32_t>(n));
      if (!detail::send_all(client, header.data(), header.size())) return true;
      if (!detail::send_all(client, payload_.data() + 2 * off, 2 * n))
        return true;
      if (realtime_) {
        const double frame_s =
            static_cast<double>(n) / sidecar_.sample_rate_hz;
        std::this_thread::sleep_for(std::chrono::duration<double>(frame_s));
      }
    }
    return true;
  }

  void serve(std::size_t max_sessions) {
    for (std::size_t i = 0; max_sessions == 0 || i < max_sessions; ++i) {
      if (stop_.load() || !serve_once()) break;
    }
  }

  void stop() {
    stop_.store(true);
    if (listen_fd_ >= 0) {
      ::shutdown(listen_fd_, SHUT_RDWR);
      ::close(listen_fd_);
      listen_fd_ = -1;
    }
  }

  ~StreamServer() { stop(); }

 private:
  std::vector<std::uint8_t> payload_;
  TraceSidecar sidecar_;
  std::size_t samples_per_frame_;
  bool realtime_;
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::atomic<bool> stop_{false};
};

struct CaptureResult {
  enum class Status { Complete, Truncated, Malformed, ConnectionLost };
  Status status = Status::Complete;
  std::uint64_t frames = 0;
  std::uint64_t samples = 0;
  std::string message;
  TraceSidecar sidecar;
};

inline const char* to_string(CaptureResult::Status s) {
  switch (s) {
    case CaptureResult::Status::Complete: return "complete";
    case CaptureResult::Status::Truncated: return "truncated";
    case CaptureResult::Status::Malformed: return "malformed";
    case CaptureResult::Status::ConnectionLost: return "connection_lost";
  }
  return "?";
}

// Connect, capture, persist. Frames received before any protocol violation
// are kept; the sidecar's truncated flag is set whenever the payload is not
// the complete advertised trace. A connect failure throws ConnectionLost.
inline CaptureResult capture_stream(const std::string& host, std::uint16_t port,
                                    const std::string& out_path,
                                    std::optional<double> duration_s = {}) {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw NetError("socket() failed");
  detail::FdGuard guard{fd};
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1)
    throw ConfigInvalid("capture host must be an IPv4 address, got " + host);
  if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0)
    throw ConnectionLost("cannot connect to " + host + ":" +
                         std::to_string(port));

  // handshake line
  std::string line;
  char ch;
  while (true) {
    const ssize_t n = ::recv(fd, &ch, 1, 0);
    if (n <= 0) throw ConnectionLost("connection closed during handshake");
    if (ch == '\n') break;
    line.push_back(ch);
    if (line.size() > 1 << 20)
      throw MalformedFrame("handshake line exceeds 1 MiB");
  }
  CaptureResult result;
  try {
    result.sidecar = sidecar_from_json(nlohmann::json::parse(line));
  } catch (const nlohmann::json::exception& e) {
    throw MalformedFrame("handshake is not valid JSON: " + std::string(e.what()));
  }

  const std::uint64_t advertised = result.sidecar.n_samples;
  std::uint64_t wanted = advertised;
  if (duration_s) {
    const auto cap = static_cast<std::uint64_t>(
        std::llround(*duration_s * result.sidecar.sample_rate_hz));
    wanted = advertised == 0 ? cap : std::min(advertised, cap);
  }

  std::vector<std::int16_t> samples;
  std::uint32_t expect_seq = 0;
  auto finish = [&](CaptureResult::Status status, const std::string& msg) {
    result.status = status;
    result.message = msg;
    result.frames = expect_seq;
    if (wanted != 0 && samples.size() > wanted) samples.resize(wanted);
    result.samples = samples.size();

    SampleTrace trace;
    trace.sample_rate_hz = result.sidecar.sample_rate_hz;
    trace.start_time_s = result.sidecar.start_time_s;
    trace.samples.resize(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i)
      trace.samples[i] = static_cast<double>(samples[i]) * result.sidecar.scale;
    if (!trace.samples.empty()) {
      const bool truncated = status != CaptureResult::Status::Complete ||
                             (advertised != 0 && samples.size() < advertised);
      write_trace(trace, out_path, result.sidecar.description,
                  result.sidecar.scale, truncated);
      result.sidecar.truncated = truncated;
    }
    return result;
  };

  while (true) {
    if (wanted != 0 && samples.size() >= wanted) {
      const bool full = advertised != 0 && samples.size() >= advertised;
      return finish(full ? CaptureResult::Status::Complete
                         : CaptureResult::Status::Truncated,
                    full ? "" : "stopped at requested duration");
    }
    std::uint8_t header[12];
    const int got = detail::recv_all(fd, header, sizeof(header));
    if (got == 0) {
      const bool full = advertised == 0 || samples.size() >= advertised;
      return finish(full ? CaptureResult::Status::Complete
                         : CaptureResult::Status::ConnectionLost,
                    full ? "" : "connection closed before the full trace");
    }
    if (got < 0)
      return finish(CaptureResult::Status::ConnectionLost,
                    "connection closed inside a frame header");
    if (std::memcmp(header, kFrameMagic, 4) != 0)
      return finish(CaptureResult::Status::Malformed, "bad frame magic");
    const std::uint32_t seq = detail::get_u32le(header + 4);
    const std::uint32_t n = detail::get_u32le(header + 8);
    if (seq != expect_seq)
      return finish(CaptureResult::Status::Malformed,
                    "sequence gap: expected " + std::to_string(expect_seq) +
                        ", got " + std::to_string(seq));
    if (n == 0 || n > kMaxFrameSamples)
      return finish(CaptureResult::Status::Malformed,
                    "frame sample count out of range");
    std::vector<std::uint8_t> body(2 * static_cast<std::size_t>(n));
    if (detail::recv_all(fd, body.data(), body.size()) != 1)
      return finish(CaptureResult::Status::ConnectionLost,
                    "connection closed inside a frame body");
    for (std::uint32_t i = 0; i < n; ++i)
      samples.push_back(detail::read_i16le(body.data() + 2 * i));
    ++expect_seq;
  }
}

}  // namespace rfsc
