#pragma once

#include <string>
#include <vector>

#include "dfs/types.hpp"

namespace dfs {

/// <sigma_+^j> = Tr(rho sigma_+^j), sigma_+ = (sx + i sy)/2, one entry per
/// spin. Unnormalized: Tr(sx^1 sigma_+^1) = 2^(n-1).
std::vector<cplx> observe(const Mat& rho);

struct Readout {
  std::string label;   // readout_01 .. readout_14
  std::string design;  // logical operators this readout is designed to expose
  Mat logical_map;     // 4x4 logical rotation applied before decoding
  Mat unitary;         // 16x16 propagator applied to the sample
};

enum class ReadoutMode { Ideal, Synthesized };

/// Readout pulses plus how records are simulated. In ideal mode the readout
/// sees only the logical block of the sample (P_L rho P_L); synthesized
/// readouts act on the full state.
struct ReadoutSet {
  std::vector<Readout> readouts;
  ReadoutMode mode = ReadoutMode::Ideal;
};

using MeasurementRecord = std::vector<cplx>;

/// Isometry |q1 q2>_L -> |q1 q2>|+>|0>: logical qubits moved onto spins 1
/// and 2 with spin 3 as a trace reference.
Mat decoder_isometry();
/// decoder_isometry completed to a 16x16 unitary (the complement goes to
/// |q1 q2>|->|0> and to the states with spin 4 up, in index order).
Mat decoder_unitary();

struct ReadoutDesign {
  std::string label;
  std::string design;
  Mat logical_map;
  /// 16x4 image the logical basis must be sent to: decoder_isometry * logical_map.
  Mat output_isometry;
};

/// The 14 readout maps. Readout 1 decodes directly (exposes XI and IX);
/// each of the other 13 rotates one remaining logical Pauli onto XI with
/// a two-qubit Clifford.
std::vector<ReadoutDesign> readout_designs();

/// Exactly embedded readouts: decoder_unitary * (logical_map (+) identity).
ReadoutSet ideal_readout_set();

/// Builds a synthesized set from propagators of designed readout pulses
/// (in readout_designs() order).
ReadoutSet readout_set_from_unitaries(const std::vector<Mat>& unitaries);

/// Forward model: stacked records (Re, Im per spin per readout) as a real
/// linear function of the 16 logical Pauli expectations c_k = Tr(rho_L P_k),
/// P_k = sigma_a (x) sigma_b with a, b in (I, X, Y, Z).
RMat forward_model(const ReadoutSet& set);

/// 2-norm condition number of the forward model.
double forward_condition(const ReadoutSet& set);

std::vector<MeasurementRecord> simulate_records(const Mat& rho, const ReadoutSet& set);

struct Reconstruction {
  Mat rho_l;                 // 4x4 Hermitian
  RVec coefficients;         // c_k
  double residual = 0.0;     // ||M c - y||_2
  double condition = 0.0;
};

/// Least-squares logical state from records; throws NumericalError when the
/// model is rank deficient and InvalidInput on mismatched lengths.
Reconstruction reconstruct(const std::vector<MeasurementRecord>& records, const ReadoutSet& set);

/// Normalized correlation of the traceless parts:
/// Tr(a~ b~) / sqrt(Tr(a~^2) Tr(b~^2)).
double correlation(const Mat& a, const Mat& b);

/// Logical Pauli coefficients c_k = Tr(rho_l P_k) in forward_model order.
RVec pauli_coefficients(const Mat& rho_l);
Mat from_pauli_coefficients(const RVec& c);

}  // namespace dfs
