#ifndef CENTEQ_LATTICEBRIDGE_HPP
#define CENTEQ_LATTICEBRIDGE_HPP

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "centeq/torus.hpp"

namespace centeq::bridge {

// Fundamental-domain arithmetic for Z^d < R^d with Sigma = [0,1)^d.
VecZ integer_part(const Vec& g);              // componentwise floor
Vec star_action(const Vec& x, const Vec& g);  // (x + g) mod 1

// L : Z^d -> R^N twisted by a homomorphism pi into commuting orthogonal
// matrices (one generator matrix per lattice basis vector; empty list means
// the trivial representation).
struct PiQuasimorphism {
  int d = 1;
  int N = 1;
  std::function<Vec(const VecZ&)> L;
  std::vector<Mat> generators;
  // optional sampler of the closure of Im pi (e.g. all rotations when a
  // generator is an irrational rotation); defaults to pi of random elements
  std::function<Mat(std::mt19937_64&)> closure_sample;

  Mat pi(const VecZ& gamma) const;
  void validate(double tol = 1e-9) const;
  Vec delta(const VecZ& a, const VecZ& b) const;  // L(a+b) - pi(a)L(b) - L(a)
  Vec c_of(const VecZ& a) const;                  // pi(a)L(-a) + L(a)
  double defect_bound(long long box) const;       // sup |delta| over the box
  double c_bound(long long box) const;            // sup |C(a)| over the box
  Mat sample_closure(std::mt19937_64& rng) const;
};

// scalar quasimorphism on Z with trivial pi
PiQuasimorphism scalar_qm(std::function<double(long long)> f);
// tiny expression parser for fixtures: sums of terms c, c*n, c*floor(c2*n),
// c*round(c2*n)
PiQuasimorphism scalar_qm_from_expr(const std::string& expr);

struct BridgeState {
  Vec x;
  Mat A;
};
struct BridgeElement {
  Vec g;
  Mat B;
};

// S((x,A),(g,B)) = A^{-1} L([x+g]) on Sigma' x G'
Vec bridge_eval(const PiQuasimorphism& qm, const BridgeState& p,
                const BridgeElement& e);
BridgeState bridge_act(const PiQuasimorphism& qm, const BridgeState& p,
                       const BridgeElement& e);
// twisted cocycle defect S(p, e1 e2) - B1 S(p*e1, e2) - S(p, e1)
Vec bridge_defect(const PiQuasimorphism& qm, const BridgeState& p,
                  const BridgeElement& e1, const BridgeElement& e2);

struct BridgeDefectReport {
  double measured = 0.0;   // sup |defect| over the samples
  double k1_bound = 0.0;   // ||delta_pi L|| over the probe box
  double k2_bound = 0.0;   // sup |C(a)| over the probe box
  bool pass = false;       // measured <= k1 + k2
  double assembled_k() const { return k1_bound + k2_bound; }
};

// samples the twisted cocycle defect and compares against the bound
// assembled from the quasimorphism constants; throws when the sampled
// defect of L itself grows with the box (not a quasimorphism)
BridgeDefectReport bridge_defect_check(const PiQuasimorphism& qm, double box,
                                       long long probe_box, int samples,
                                       std::uint64_t seed);

// defect of the Z-quasicocycle S_n(x) = ell . L([x + n a]) over the star
// action of the single translation a
double z_cocycle_defect(const PiQuasimorphism& qm, const Vec& a,
                        const Vec& ell, int n_max, int samples,
                        std::uint64_t seed);

// sup over samples of |(z^{-1} - I) L([x+g])| for z in the closure of Im pi
double z_twist_sup(const PiQuasimorphism& qm, double box, int samples,
                   std::uint64_t seed);

// group-cohomology differential with the pi(x_1) twist; n is the arity of
// the returned function, f takes n-1 arguments
using TupleFn = std::function<Vec(const std::vector<VecZ>&)>;
TupleFn coboundary(const TupleFn& f, const PiQuasimorphism& qm, int n);

struct HomogenizeResult {
  double value = 0.0;
  bool converged = false;
};

// L_bar(gamma) = lim_k L(k gamma)/k evaluated at k = n_limit; the flag
// compares against the half-resolution estimate
HomogenizeResult homogenize_at(const std::function<double(long long)>& L,
                               long long gamma, long long n_limit = 1 << 23);

struct SplitFixedSpace {
  Mat e_basis;  // columns span the common fixed space of the generators
  Mat f_basis;  // orthogonal complement
  bool f_has_fixed_vector = false;  // sanity: must be false
};

SplitFixedSpace split_fixed_space(const std::vector<Mat>& generators, int n);

struct HaarAverage {
  Vec H;
  bool converged = false;
};

// H(a) = lim (1/n) int_{[0,1)^d} L([x + n a]) dx by quadrature at n_limit
HaarAverage haar_average_H(const PiQuasimorphism& qm, const Vec& a,
                           long long n_limit = 1 << 20);

}  // namespace centeq::bridge

#endif
