#include "vela/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "vela/errors.hpp"

namespace vela {

namespace {

constexpr char kMagic[8] = {'V', 'E', 'L', 'A', '0', '0', '0', '1'};

void put_u64(std::string& out, std::uint64_t v, int bytes) {
  for (int b = 0; b < bytes; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
}
void put_f64(std::string& out, double x) { put_u64(out, std::bit_cast<std::uint64_t>(x), 8); }

class Reader {
 public:
  explicit Reader(const std::string& b) : bytes_(b) {}
  std::uint64_t u(int bytes) {
    need(bytes);
    std::uint64_t v = 0;
    for (int b = 0; b < bytes; ++b)
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + b])) << (8 * b);
    pos_ += bytes;
    return v;
  }
  double f64() { return std::bit_cast<double>(u(8)); }
  void skip(std::size_t n) {
    need(n);
    pos_ += n;
  }
  bool at_end() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > bytes_.size()) throw CheckpointError("checkpoint: short read");
  }
  const std::string& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string encode_checkpoint(const Checkpoint& c) {
  const State& s = c.state;
  const Grid& g = s.grid();
  std::string out(kMagic, 8);
  put_u64(out, kCheckpointVersion, 4);
  put_u64(out, static_cast<std::uint64_t>(g.dim()), 4);
  put_u64(out, static_cast<std::uint64_t>(g.n()), 4);
  put_f64(out, g.length());
  put_f64(out, s.t);
  put_f64(out, c.gamma);
  put_f64(out, c.mu);
  out.push_back(c.mode == Mode::incompressible ? 0 : 1);
  out.append(7, '\0');
  out.reserve(out.size() + 8 * g.size() * (1 + g.dim() + g.dim() * g.dim()));
  for (double x : s.rho.values()) put_f64(out, x);
  for (const auto& comp : s.u.comps())
    for (double x : comp) put_f64(out, x);
  for (const auto& comp : s.E.comps())
    for (double x : comp) put_f64(out, x);
  return out;
}

Checkpoint decode_checkpoint(const std::string& bytes, std::optional<int> expected_dim) {
  if (bytes.size() < 8) throw CheckpointError("checkpoint: short read");
  if (std::memcmp(bytes.data(), kMagic, 8) != 0) throw CheckpointError("checkpoint: bad magic");
  Reader r(bytes);
  r.skip(8);
  const auto version = static_cast<std::uint32_t>(r.u(4));
  if (version != kCheckpointVersion) {
    std::ostringstream os;
    os << "checkpoint: version mismatch (file " << version << ", expected " << kCheckpointVersion << ")";
    throw CheckpointError(os.str());
  }
  const int dim = static_cast<int>(r.u(4));
  const int n = static_cast<int>(r.u(4));
  if (expected_dim && *expected_dim != dim) {
    std::ostringstream os;
    os << "checkpoint: dimension mismatch (file " << dim << ", expected " << *expected_dim << ")";
    throw CheckpointError(os.str());
  }
  const double length = r.f64();
  const double t = r.f64();
  const double gamma = r.f64();
  const double mu = r.f64();
  const auto mode = r.u(1);
  r.skip(7);
  if (mode > 1) throw CheckpointError("checkpoint: bad mode byte");

  Grid grid = Grid::make(2, 8, 1.0);
  try {
    grid = Grid::make(dim, n, length);
  } catch (const std::invalid_argument& e) {
    throw CheckpointError(std::string("checkpoint: bad grid header: ") + e.what());
  }
  Checkpoint c{State(grid), gamma, mu, mode == 0 ? Mode::incompressible : Mode::compressible};
  c.state.t = t;
  for (double& x : c.state.rho.values()) x = r.f64();
  for (auto& comp : c.state.u.comps())
    for (double& x : comp) x = r.f64();
  for (auto& comp : c.state.E.comps())
    for (double& x : comp) x = r.f64();
  if (!r.at_end()) throw CheckpointError("checkpoint: trailing bytes after payload");
  return c;
}

void write_checkpoint(const Checkpoint& c, const std::string& path) {
  const std::string bytes = encode_checkpoint(c);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw CheckpointError("checkpoint: cannot open '" + path + "' for writing");
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw CheckpointError("checkpoint: write failed for '" + path + "'");
}

Checkpoint read_checkpoint(const std::string& path, std::optional<int> expected_dim) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw CheckpointError("checkpoint: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return decode_checkpoint(ss.str(), expected_dim);
}

}  // namespace vela
