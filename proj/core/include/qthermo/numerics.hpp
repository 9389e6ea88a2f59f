#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qthermo {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;
using IMat = Eigen::MatrixXi;

/// Malformed input: wrong shapes, non-Hermitian data, invalid states or channels.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A spectral function was asked for at or below the positivity floor.
class SingularityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Internal consistency check failed (property violation).
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct HermitianSpectrum {
  RVec eigenvalues;   // ascending
  CMat eigenvectors;  // columns, unitary
};

/// 1e-9 * (1 + ||A||_F)
double hermitian_tolerance(const CMat& a);

/// 1e-10 * max eigenvalue
double positivity_floor(const RVec& eigenvalues);

/// Decomposes (A + A*)/2.  Throws ValidationError if A is not square or
/// ||A - A*|| exceeds hermitian_tolerance(A).  Each eigenvector is rotated so
/// that its largest-magnitude entry (first one on ties) is real positive.
HermitianSpectrum herm_eig(const CMat& a);

CMat reconstruct(const HermitianSpectrum& s);

enum class SpectralFunction { Log, Exp, ImagPower };

struct MatrixFunction {
  SpectralFunction kind;
  double t = 0.0;  // exponent for ImagPower: A^{it}

  static MatrixFunction log() { return {SpectralFunction::Log, 0.0}; }
  static MatrixFunction exp() { return {SpectralFunction::Exp, 0.0}; }
  static MatrixFunction ipow(double t) { return {SpectralFunction::ImagPower, t}; }
};

/// f(A) on the spectrum.  Log and ImagPower need every eigenvalue above
/// positivity_floor, otherwise SingularityError.
CMat func_calc(const CMat& a, MatrixFunction f);

CMat mat_log(const CMat& a);
CMat mat_exp(const CMat& a);
CMat mat_ipow(const CMat& a, double t);
/// Real power of a positive semidefinite matrix.  Negative powers act on the
/// support only (eigenvalues at or below the floor map to zero).
CMat mat_pow(const CMat& a, double p);
CMat mat_sqrt(const CMat& a);

struct PerronFrobenius {
  double norm = 0.0;  // largest singular value
  RVec left;          // unit, nonnegative, length rows
  RVec right;         // unit, nonnegative, length cols
};

/// Operator norm and extremal vectors of an entrywise nonnegative matrix.
PerronFrobenius pf_eigen(const RMat& d);

/// Spectral norm.
double op_norm(const CMat& a);

CMat kron(const CMat& a, const CMat& b);

/// Direct sum of (possibly rectangular) blocks.
CMat block_diag(const std::vector<CMat>& blocks);

/// Orthonormal basis (columns) of the range of a PSD matrix; eigenvalues
/// above rel_cut * max are kept.
CMat range_basis(const CMat& psd, double rel_cut = 1e-10);

/// Moore-Penrose pseudo inverse with relative cutoff.
CMat pinv(const CMat& a, double rel_cut = 1e-12);

}  // namespace qthermo
