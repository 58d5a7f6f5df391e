#include "dfs/spin_model.hpp"

#include <cmath>
#include <string>

namespace dfs {
namespace {

Mat single_pauli(Axis axis) {
  Mat s = Mat::Zero(2, 2);
  switch (axis) {
    case Axis::X:
      s(0, 1) = 1.0;
      s(1, 0) = 1.0;
      break;
    case Axis::Y:
      s(0, 1) = -kI;
      s(1, 0) = kI;
      break;
    case Axis::Z:
      s(0, 0) = 1.0;
      s(1, 1) = -1.0;
      break;
  }
  return s;
}

void check_square_symmetric(const RMat& m, std::size_t n, const char* name) {
  if (static_cast<std::size_t>(m.rows()) != n || static_cast<std::size_t>(m.cols()) != n)
    throw InvalidInput(std::string(name) + ": expected " + std::to_string(n) + "x" +
                       std::to_string(n) + " matrix");
  for (std::size_t a = 0; a < n; ++a) {
    if (!std::isfinite(m(a, a)) || m(a, a) != 0.0)
      throw InvalidInput(std::string(name) + ": diagonal entry (" + std::to_string(a + 1) +
                         "," + std::to_string(a + 1) + ") must be zero");
    for (std::size_t b = a + 1; b < n; ++b) {
      if (!std::isfinite(m(a, b)) || !std::isfinite(m(b, a)))
        throw InvalidInput(std::string(name) + ": non-finite entry");
      if (m(a, b) != m(b, a))
        throw InvalidInput(std::string(name) + ": not symmetric at (" + std::to_string(a + 1) +
                           "," + std::to_string(b + 1) + ")");
    }
  }
}

}  // namespace

void SpinSystem::validate() const {
  if (nu.empty()) throw InvalidInput("nu: at least one spin required");
  if (nu.size() > 12) throw InvalidInput("nu: more than 12 spins is not supported");
  for (double v : nu)
    if (!std::isfinite(v)) throw InvalidInput("nu: non-finite chemical shift");
  check_square_symmetric(d, nu.size(), "d");
  check_square_symmetric(j, nu.size(), "j");
}

SpinSystem SpinSystem::subsystem(const std::vector<std::size_t>& spins) const {
  SpinSystem out;
  const auto m = static_cast<Eigen::Index>(spins.size());
  out.d = RMat::Zero(m, m);
  out.j = RMat::Zero(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    if (spins[a] >= n_spins()) throw InvalidInput("subsystem: spin index out of range");
    out.nu.push_back(nu[spins[a]]);
    for (Eigen::Index b = 0; b < m; ++b) {
      out.d(a, b) = d(spins[a], spins[b]);
      out.j(a, b) = j(spins[a], spins[b]);
    }
  }
  return out;
}

SpinSystem SpinSystem::permuted(const std::vector<std::size_t>& perm) const {
  if (perm.size() != n_spins()) throw InvalidInput("permuted: permutation size mismatch");
  return subsystem(perm);
}

SpinSystem SpinSystem::uncoupled(std::vector<double> shifts) {
  SpinSystem s;
  const auto n = static_cast<Eigen::Index>(shifts.size());
  s.nu = std::move(shifts);
  s.d = RMat::Zero(n, n);
  s.j = RMat::Zero(n, n);
  return s;
}

SpinSystem cnb_nominal() {
  SpinSystem s = SpinSystem::uncoupled({115.0, -234.0, 204.0, -86.0});
  auto set = [&s](int a, int b, double v) {
    s.d(a - 1, b - 1) = v;
    s.d(b - 1, a - 1) = v;
  };
  set(1, 2, -729.0);
  set(2, 3, -503.0);
  set(3, 4, -1875.0);
  set(1, 3, 116.0);
  set(1, 4, -64.0);
  set(2, 4, -170.0);
  return s;
}

Mat pauli_embed(std::size_t n, std::size_t spin, Axis axis) {
  if (n == 0 || n > 12) throw InvalidInput("pauli_embed: spin count must be in [1, 12]");
  if (spin < 1 || spin > n) throw InvalidInput("pauli_embed: spin index out of range");
  Mat out = Mat::Identity(1, 1);
  for (std::size_t k = 1; k <= n; ++k) {
    const Mat factor = (k == spin) ? single_pauli(axis) : Mat::Identity(2, 2);
    Mat next(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index r = 0; r < out.rows(); ++r)
      for (Eigen::Index c = 0; c < out.cols(); ++c)
        next.block(2 * r, 2 * c, 2, 2) = out(r, c) * factor;
    out = std::move(next);
  }
  return out;
}

Mat collective(std::size_t n, Axis axis) {
  Mat s = Mat::Zero(std::size_t{1} << n, std::size_t{1} << n);
  for (std::size_t k = 1; k <= n; ++k) s += pauli_embed(n, k, axis);
  return s;
}

RVec total_fz_diagonal(std::size_t n) {
  const std::size_t dim = std::size_t{1} << n;
  RVec fz(dim);
  for (std::size_t idx = 0; idx < dim; ++idx) {
    const int ones = __builtin_popcountll(idx);
    fz(idx) = 0.5 * (static_cast<double>(n) - 2.0 * ones);
  }
  return fz;
}

Mat total_fz(std::size_t n) { return total_fz_diagonal(n).cast<cplx>().asDiagonal(); }

Mat internal_hamiltonian(const SpinSystem& sys) {
  sys.validate();
  const std::size_t n = sys.n_spins();
  std::vector<Mat> sx, sy, sz;
  for (std::size_t k = 1; k <= n; ++k) {
    sx.push_back(pauli_embed(n, k, Axis::X));
    sy.push_back(pauli_embed(n, k, Axis::Y));
    sz.push_back(pauli_embed(n, k, Axis::Z));
  }
  Mat h = Mat::Zero(sys.dim(), sys.dim());
  for (std::size_t a = 0; a < n; ++a) h += kPi * sys.nu[a] * sz[a];
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const double jab = sys.j(a, b);
      const double dab = sys.d(a, b);
      if (jab + 2.0 * dab != 0.0) h += 0.5 * kPi * (jab + 2.0 * dab) * (sz[a] * sz[b]);
      if (jab - dab != 0.0)
        h += 0.5 * kPi * (jab - dab) * (sx[a] * sx[b] + sy[a] * sy[b]);
    }
  }
  return h;
}

Mat rf_hamiltonian(std::size_t n, double ux_hz, double uy_hz, double eps) {
  if (!(eps > 0.0)) throw InvalidInput("rf_hamiltonian: eps must be positive");
  return kPi * eps * (ux_hz * collective(n, Axis::X) + uy_hz * collective(n, Axis::Y));
}

Mat qubit_permutation(std::size_t n, const std::vector<std::size_t>& perm) {
  if (perm.size() != n) throw InvalidInput("qubit_permutation: size mismatch");
  const std::size_t dim = std::size_t{1} << n;
  Mat p = Mat::Zero(dim, dim);
  for (std::size_t idx = 0; idx < dim; ++idx) {
    std::size_t out = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t bit = (idx >> (n - 1 - perm[k])) & 1u;
      out |= bit << (n - 1 - k);
    }
    p(out, idx) = 1.0;
  }
  return p;
}

}  // namespace dfs
