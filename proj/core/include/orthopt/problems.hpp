#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>

#include "orthopt/linsolve.hpp"
#include "orthopt/matrix.hpp"

namespace orthopt {

enum class ProblemKind { P1, P2, P3, P4, P6 };

/// Operator matrix flavor for the density-functional problem families:
/// dense random symmetric, or block-diagonal with 5x5 tridiagonal (2,-1)
/// blocks (the cheap, structured instance used for scaling studies).
enum class OperatorMode { RandomSym, BlockTridiag };

struct Evaluation {
  double value = 0.0;
  DenseMatrix gradient;
};

/// A smooth objective over n-by-p matrices together with its dimensions and a
/// curvature scale s (an estimate of the Hessian spectral norm at the origin,
/// used to pick default penalty and proximal parameters). Models are immutable
/// after generation and safe to evaluate concurrently.
class ObjectiveModel {
public:
  virtual ~ObjectiveModel() = default;

  std::int64_t n() const { return n_; }
  std::int64_t p() const { return p_; }
  ProblemKind kind() const { return kind_; }
  double curvature_scale() const { return s_; }

  /// Objective value and Euclidean gradient at x. Throws evaluation_error if
  /// either comes out non-finite for finite x.
  virtual Evaluation evaluate(const DenseMatrix& x, int threads = 1) const = 0;

  virtual void save(std::ostream& out) const = 0;

protected:
  ObjectiveModel(std::int64_t n, std::int64_t p, ProblemKind kind, double s)
      : n_(n), p_(p), kind_(kind), s_(s) {}

  std::int64_t n_;
  std::int64_t p_;
  ProblemKind kind_;
  double s_;
};

/// f(X) = 1/2 tr(XᵀAX) + tr(GᵀX); covers the general quadratic family and the
/// trace-minimization special case (G = 0).
class QuadraticModel : public ObjectiveModel {
public:
  QuadraticModel(SquareSymmetric a, DenseMatrix g, ProblemKind kind, double s);

  Evaluation evaluate(const DenseMatrix& x, int threads = 1) const override;
  void save(std::ostream& out) const override;

  const SquareSymmetric& a() const { return a_; }
  const DenseMatrix& g() const { return g_; }
  double kappa = 0.0, theta = 1.0, zeta = 1.0, xi = 1.0;  // generator echo

private:
  SquareSymmetric a_;
  DenseMatrix g_;
};

/// f(X) = 1/2 tr(AᵀXBXᵀ) with symmetric A (n-by-n) and B (p-by-p).
class BilinearModel : public ObjectiveModel {
public:
  BilinearModel(SquareSymmetric a, SquareSymmetric b, double s);

  Evaluation evaluate(const DenseMatrix& x, int threads = 1) const override;
  void save(std::ostream& out) const override;

  const SquareSymmetric& a() const { return a_; }
  const SquareSymmetric& b() const { return b_; }

private:
  SquareSymmetric a_;
  SquareSymmetric b_;
};

/// Simplified density-functional energies built on an invertible symmetric
/// operator L and the density rho(X) = diag(XXᵀ):
///   P1: 1/2 tr(XᵀLX) + alpha/4 rhoᵀ L⁻¹ rho
///   P6: 1/2 tr(XᵀLX) + 1/2 rhoᵀ L⁻¹ rho - 3/4 gamma rhoᵀ rho^(1/3)
/// L⁻¹ rho is computed through a factorize-once solve. The cube root term is
/// defined as 0 at rho_i = 0, where the model is not differentiable.
class DensityModel : public ObjectiveModel {
public:
  DensityModel(SquareSymmetric l, std::int64_t p, double coeff, ProblemKind kind,
               OperatorMode mode, double s);

  Evaluation evaluate(const DenseMatrix& x, int threads = 1) const override;
  void save(std::ostream& out) const override;

  const SquareSymmetric& l() const { return l_; }
  double alpha() const { return coeff_; }  // P1
  double gamma() const { return coeff_; }  // P6
  OperatorMode mode() const { return mode_; }

private:
  SquareSymmetric l_;
  double coeff_;
  OperatorMode mode_;
  LinearSolver solver_;
};

// Generators. All consume a 64-bit seed through the documented Rng stream in a
// fixed order, so the same seed reproduces bitwise-identical instances.
// Precondition for every family: 2p <= n.

std::unique_ptr<ObjectiveModel> gen_problem1(std::int64_t n, std::int64_t p,
                                             double alpha, OperatorMode mode,
                                             std::uint64_t seed, int threads = 1);

std::unique_ptr<ObjectiveModel> gen_problem2(std::int64_t n, std::int64_t p,
                                             double kappa, double theta,
                                             double zeta, double xi,
                                             std::uint64_t seed, int threads = 1);

/// Trace minimization: gen_problem2 with kappa = 0, tagged as P3.
std::unique_ptr<ObjectiveModel> gen_problem3(std::int64_t n, std::int64_t p,
                                             double theta, double xi,
                                             std::uint64_t seed, int threads = 1);

std::unique_ptr<ObjectiveModel> gen_problem4(std::int64_t n, std::int64_t p,
                                             std::uint64_t seed, int threads = 1);

std::unique_ptr<ObjectiveModel> gen_problem6(std::int64_t n, std::int64_t p,
                                             OperatorMode mode, std::uint64_t seed,
                                             int threads = 1);

/// Wraps an explicit quadratic instance (used by drivers and tests); g must be
/// n-by-p (a zero matrix gives a pure trace objective). s is estimated from a
/// when not supplied.
std::unique_ptr<ObjectiveModel> make_quadratic(SquareSymmetric a, DenseMatrix g,
                                               ProblemKind kind = ProblemKind::P2,
                                               double s = -1.0, int threads = 1);

/// Max over a seeded sample of at least 50 coordinates of the relative
/// mismatch |central difference - gradient| / (1 + |gradient|). Step per
/// coordinate is h·(1 + |x_ij|).
double fd_gradient_check(const ObjectiveModel& model, const DenseMatrix& x,
                         double h = 1e-5, std::uint64_t seed = 0x5eedc0de);

/// Binary container round trip (magic bytes, dims, kind tag, little-endian
/// raw 64-bit floats).
void save_problem(const ObjectiveModel& model, std::ostream& out);
std::unique_ptr<ObjectiveModel> load_problem(std::istream& in);

const char* problem_kind_name(ProblemKind k);

}  // namespace orthopt
