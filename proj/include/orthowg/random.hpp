#ifndef ORTHOWG_RANDOM_HPP
#define ORTHOWG_RANDOM_HPP

// Counter-based random numbers (Philox4x32-10) and Haar orthogonal sampling.
//
// A draw is addressed by (seed, sample, stream, block), so every sample of a
// Monte Carlo run has its own substream and the result does not depend on
// which thread produced it.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace orthowg {

using Counter4 = std::array<std::uint32_t, 4>;
using Key2 = std::array<std::uint32_t, 2>;

/// Philox4x32 with 10 rounds.
inline Counter4 philox4x32_10(Counter4 ctr, Key2 key) {
  constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
  constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(M0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(M1) * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += W0;
    key[1] += W1;
  }
  return ctr;
}

inline constexpr const char* kRngName = "philox4x32-10";

/// Sequential reader of one substream; yields uniforms in (0,1) and standard
/// normals (Box-Muller, both outputs used).
class PhiloxStream {
 public:
  PhiloxStream(std::uint64_t seed, std::uint64_t sample, std::uint32_t stream)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        sample_lo_(static_cast<std::uint32_t>(sample)),
        sample_hi_(static_cast<std::uint32_t>(sample >> 32)),
        stream_(stream) {}

  std::uint32_t next_u32() {
    if (used_ == 4) refill();
    return buf_[used_++];
  }

  double uniform() { return (static_cast<double>(next_u32()) + 0.5) * 0x1p-32; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform(), u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
  }

 private:
  void refill() {
    buf_ = philox4x32_10({block_++, sample_lo_, sample_hi_, stream_}, key_);
    used_ = 0;
  }

  Key2 key_;
  std::uint32_t sample_lo_, sample_hi_, stream_;
  std::uint32_t block_ = 0;
  Counter4 buf_{};
  int used_ = 4;
  bool has_spare_ = false;
  double spare_ = 0;
};

/// Haar orthogonal matrix: QR of a Gaussian matrix, with the columns of Q
/// rescaled so that R has a positive diagonal.
inline Eigen::MatrixXd haar_orthogonal(int n, PhiloxStream& rng) {
  Eigen::MatrixXd g(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd& r = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  }
  return q;
}

}  // namespace orthowg

#endif  // ORTHOWG_RANDOM_HPP
