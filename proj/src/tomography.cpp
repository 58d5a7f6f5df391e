#include "dfs/tomography.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <deque>
#include <optional>

#include "dfs/logical.hpp"
#include "dfs/spin_model.hpp"

namespace dfs {
namespace {

constexpr std::array<LogicalAxis, 4> kAxes{LogicalAxis::I, LogicalAxis::X, LogicalAxis::Y, LogicalAxis::Z};
constexpr const char* kAxisNames = "IXYZ";

Mat pauli_k(std::size_t k) { return two_qubit_pauli(kAxes[k / 4], kAxes[k % 4]); }

std::string pauli_name(std::size_t k) { return {kAxisNames[k / 4], kAxisNames[k % 4]}; }

const std::vector<Mat>& pauli_table() {
  static const std::vector<Mat> table = [] {
    std::vector<Mat> t;
    for (std::size_t k = 0; k < 16; ++k) t.push_back(pauli_k(k));
    return t;
  }();
  return table;
}

// Index of the Pauli q equals up to sign, with the sign, or nullopt.
std::optional<std::pair<std::size_t, int>> identify_pauli(const Mat& q) {
  for (std::size_t k = 0; k < 16; ++k) {
    const cplx c = (pauli_table()[k] * q).trace() / 4.0;
    if (std::abs(std::abs(c.real()) - 1.0) < 1e-9 && std::abs(c.imag()) < 1e-9)
      return std::make_pair(k, c.real() > 0 ? 1 : -1);
  }
  return std::nullopt;
}

std::vector<Mat> clifford_generators() {
  const double r = 1.0 / std::sqrt(2.0);
  Mat h(2, 2);
  h << r, r, r, -r;
  Mat s = Mat::Identity(2, 2);
  s(1, 1) = kI;
  const Mat id = Mat::Identity(2, 2);
  Mat cnot12 = Mat::Zero(4, 4);
  cnot12(0, 0) = cnot12(1, 1) = cnot12(2, 3) = cnot12(3, 2) = 1.0;
  Mat cnot21 = Mat::Zero(4, 4);
  cnot21(0, 0) = cnot21(3, 1) = cnot21(2, 2) = cnot21(1, 3) = 1.0;
  return {kron(h, id), kron(id, h), kron(s, id), kron(id, s), cnot12, cnot21};
}

// Shortest generator word L with L P L^dag = +/- target (breadth-first over
// Pauli images; at most 15 states).
Mat clifford_mapping(std::size_t from, std::size_t to) {
  const auto gens = clifford_generators();
  struct Node {
    std::size_t pauli;
    Mat word;
  };
  std::deque<Node> queue{{from, Mat::Identity(4, 4)}};
  std::array<bool, 16> seen{};
  seen[from] = true;
  while (!queue.empty()) {
    Node node = queue.front();
    queue.pop_front();
    if (node.pauli == to) return node.word;
    for (const Mat& g : gens) {
      const auto image = identify_pauli(g * pauli_table()[node.pauli] * g.adjoint());
      if (!image || seen[image->first]) continue;
      seen[image->first] = true;
      queue.push_back({image->first, g * node.word});
    }
  }
  throw NumericalError("clifford_mapping: target Pauli unreachable");
}

std::vector<Mat> transverse_observables(std::size_t n) {
  std::vector<Mat> out;
  for (std::size_t k = 1; k <= n; ++k)
    out.push_back(0.5 * (pauli_embed(n, k, Axis::X) + kI * pauli_embed(n, k, Axis::Y)));
  return out;
}

const std::vector<Mat>& transverse4() {
  static const std::vector<Mat> ops = transverse_observables(4);
  return ops;
}

}  // namespace

std::vector<cplx> observe(const Mat& rho) {
  if (rho.rows() != rho.cols() || rho.rows() < 2 || (rho.rows() & (rho.rows() - 1)) != 0)
    throw InvalidInput("observe: expected a 2^n x 2^n matrix");
  std::size_t n = 0;
  while ((Eigen::Index{1} << n) < rho.rows()) ++n;
  const auto& ops = n == 4 ? transverse4() : transverse_observables(n);
  std::vector<cplx> out;
  out.reserve(n);
  for (const Mat& op : ops) out.push_back((rho * op).trace());
  return out;
}

Mat decoder_isometry() {
  const double r = 1.0 / std::sqrt(2.0);
  Mat c = Mat::Zero(16, 4);
  for (std::size_t q = 0; q < 4; ++q) {
    c(q << 2, q) = r;
    c((q << 2) | 2u, q) = r;
  }
  return c;
}

Mat decoder_unitary() {
  const double r = 1.0 / std::sqrt(2.0);
  const auto& ls = logical_basis();
  Mat images = Mat::Zero(16, 16);  // column i: image of computational state i
  for (std::size_t q = 0; q < 4; ++q) images.col(LogicalSubspace::kIndices[q]) = decoder_isometry().col(q);
  std::vector<Vec> rest;
  for (std::size_t q = 0; q < 4; ++q) {
    Vec v = Vec::Zero(16);
    v(q << 2) = r;
    v((q << 2) | 2u) = -r;
    rest.push_back(v);
  }
  for (std::size_t idx = 1; idx < 16; idx += 2) rest.push_back(Vec::Unit(16, idx));
  std::size_t next = 0;
  for (Eigen::Index col = 0; col < 12; ++col) {
    const Vec& source = ls.complement.col(col);
    Eigen::Index idx = 0;
    source.cwiseAbs().maxCoeff(&idx);
    images.col(idx) = rest[next++];
  }
  return images;
}

std::vector<ReadoutDesign> readout_designs() {
  static const std::vector<ReadoutDesign> designs = [] {
    std::vector<ReadoutDesign> out;
    const Mat c = decoder_isometry();
    const std::size_t xi = 4;  // X (x) I
    out.push_back({"readout_01", "XI,IX", Mat::Identity(4, 4), c});
    for (std::size_t k = 1; k < 16; ++k) {
      if (k == xi || k == 1) continue;  // XI and IX are covered by readout_01
      const Mat l = clifford_mapping(k, xi);
      char label[16];
      std::snprintf(label, sizeof label, "readout_%02zu", out.size() + 1);
      out.push_back({label, pauli_name(k), l, c * l});
    }
    return out;
  }();
  return designs;
}

ReadoutSet ideal_readout_set() {
  ReadoutSet set;
  set.mode = ReadoutMode::Ideal;
  const Mat dec = decoder_unitary();
  for (const auto& d : readout_designs())
    set.readouts.push_back({d.label, d.design, d.logical_map, dec * embed_logical_unitary(d.logical_map)});
  return set;
}

ReadoutSet readout_set_from_unitaries(const std::vector<Mat>& unitaries) {
  const auto& designs = readout_designs();
  if (unitaries.size() != designs.size())
    throw InvalidInput("readout_set_from_unitaries: expected " + std::to_string(designs.size()) + " propagators");
  ReadoutSet set;
  set.mode = ReadoutMode::Synthesized;
  for (std::size_t r = 0; r < designs.size(); ++r) {
    if (unitaries[r].rows() != 16 || !is_unitary(unitaries[r], 1e-8))
      throw InvalidInput("readout_set_from_unitaries: " + designs[r].label + " is not a 16x16 unitary");
    set.readouts.push_back({designs[r].label, designs[r].design, designs[r].logical_map, unitaries[r]});
  }
  return set;
}

RMat forward_model(const ReadoutSet& set) {
  if (set.readouts.empty()) throw InvalidInput("forward_model: empty readout set");
  const Mat& e = logical_basis().basis;
  const auto& ops = transverse4();
  RMat m(static_cast<Eigen::Index>(set.readouts.size() * ops.size() * 2), 16);
  Eigen::Index row = 0;
  for (const auto& r : set.readouts) {
    for (const Mat& op : ops) {
      // Pulled-back observable on the logical block.
      const Mat pulled = e.adjoint() * r.unitary.adjoint() * op * r.unitary * e;
      for (std::size_t k = 0; k < 16; ++k) {
        const cplx v = (pauli_table()[k] * pulled).trace() / 4.0;
        m(row, static_cast<Eigen::Index>(k)) = v.real();
        m(row + 1, static_cast<Eigen::Index>(k)) = v.imag();
      }
      row += 2;
    }
  }
  return m;
}

double forward_condition(const ReadoutSet& set) {
  Eigen::JacobiSVD<RMat> svd(forward_model(set));
  const RVec& s = svd.singularValues();
  return s(s.size() - 1) > 0.0 ? s(0) / s(s.size() - 1) : std::numeric_limits<double>::infinity();
}

std::vector<MeasurementRecord> simulate_records(const Mat& rho, const ReadoutSet& set) {
  if (rho.rows() != 16 || rho.cols() != 16) throw InvalidInput("simulate_records: expected a 16x16 state");
  const Mat sample = set.mode == ReadoutMode::Ideal
                         ? Mat(logical_basis().projector * rho * logical_basis().projector)
                         : rho;
  std::vector<MeasurementRecord> out;
  for (const auto& r : set.readouts) out.push_back(observe(r.unitary * sample * r.unitary.adjoint()));
  return out;
}

Reconstruction reconstruct(const std::vector<MeasurementRecord>& records, const ReadoutSet& set) {
  if (records.size() != set.readouts.size())
    throw InvalidInput("reconstruct: " + std::to_string(records.size()) + " records for " +
                       std::to_string(set.readouts.size()) + " readouts");
  const RMat m = forward_model(set);
  RVec y(m.rows());
  Eigen::Index row = 0;
  for (const auto& rec : records) {
    if (rec.size() != 4) throw InvalidInput("reconstruct: each record needs 4 channels");
    for (const cplx& v : rec) {
      y(row++) = v.real();
      y(row++) = v.imag();
    }
  }
  Eigen::JacobiSVD<RMat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVec& s = svd.singularValues();
  if (!(s(s.size() - 1) > 1e-10 * s(0)))
    throw NumericalError("reconstruct: forward model is rank deficient");
  Reconstruction out;
  out.coefficients = svd.solve(y);
  out.residual = (m * out.coefficients - y).norm();
  out.condition = s(0) / s(s.size() - 1);
  out.rho_l = from_pauli_coefficients(out.coefficients);
  return out;
}

double correlation(const Mat& a, const Mat& b) {
  if (a.rows() != a.cols() || a.rows() != b.rows() || b.rows() != b.cols() || a.rows() == 0)
    throw InvalidInput("correlation: operands must be square and of equal size");
  const auto d = static_cast<double>(a.rows());
  const Mat id = Mat::Identity(a.rows(), a.cols());
  const Mat at = a - (a.trace() / d) * id;
  const Mat bt = b - (b.trace() / d) * id;
  const double naa = (at.adjoint() * at).trace().real();
  const double nbb = (bt.adjoint() * bt).trace().real();
  if (!(naa > 0.0) || !(nbb > 0.0)) throw InvalidInput("correlation: zero deviation");
  return (at.adjoint() * bt).trace().real() / std::sqrt(naa * nbb);
}

RVec pauli_coefficients(const Mat& rho_l) {
  if (rho_l.rows() != 4 || rho_l.cols() != 4) throw InvalidInput("pauli_coefficients: expected 4x4");
  RVec c(16);
  for (std::size_t k = 0; k < 16; ++k)
    c(static_cast<Eigen::Index>(k)) = (pauli_table()[k] * rho_l).trace().real();
  return c;
}

Mat from_pauli_coefficients(const RVec& c) {
  if (c.size() != 16) throw InvalidInput("from_pauli_coefficients: expected 16 coefficients");
  Mat rho = Mat::Zero(4, 4);
  for (std::size_t k = 0; k < 16; ++k) rho += (c(static_cast<Eigen::Index>(k)) / 4.0) * pauli_table()[k];
  return rho;
}

}  // namespace dfs
