#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <vector>

#include "oseentp/params.hpp"
#include "oseentp/vec.hpp"

// Independent oracles used to cross-check the kernel implementations:
// discrete-symbol FFT inversion on a periodic box, brute-force convolution
// quadrature, and finite-difference PDE residuals. None of them share code
// paths with the evaluators they validate.

namespace oseentp {

struct FFTGridSpec {
    double L = 16.0;  // box half-length; the box is [-L, L)^3
    int n = 64;       // grid size per axis, power of two
    int k = 1;        // temporal mode, nonzero
    KernelParams params;

    void validate() const;
};

// Inverse discrete Fourier transform of the mode symbol
//   (I - xihat xihat^T) / (nu |xi|^2 + i (lambda_k - zeta.xi))
// on the dual grid of [-L, L)^3. The xi = 0 coefficient is set to
// (2/3) I / (i lambda_k) (angular average of the projector); comparisons must
// therefore be mean-subtracted. Periodization and symbol truncation make this
// a genuinely independent, if coarse, reference for the mode kernels.
class FFTModeOracle {
  public:
    explicit FFTModeOracle(const FFTGridSpec& spec);

    const FFTGridSpec& spec() const { return spec_; }
    double dx() const { return 2.0 * spec_.L / spec_.n; }

    // Value at the grid node nearest to x; |x| must stay within L/4 (aliasing
    // guard). snapped() reports the node actually used.
    CMat3 at_nearest(const Vec3& x) const;
    Vec3 snapped(const Vec3& x) const;

    // All grid nodes with radius in [rmin, rmax], subsampled to at most
    // max_count nodes (deterministic stride).
    std::vector<Vec3> nodes_in_shell(double rmin, double rmax, std::size_t max_count) const;

  private:
    std::size_t flat(const Vec3& x) const;

    FFTGridSpec spec_;
    std::vector<cplx> field_[3][3];  // field_[i][j][linear grid index]
};

// Mean-subtracted relative Frobenius error between two tensor samples:
//   sqrt( sum ||(a_i - mean a) - (b_i - mean b)||^2 / sum ||b_i - mean b||^2 ).
double mean_subtracted_rel_error(const std::vector<CMat3>& got, const std::vector<CMat3>& ref);

// Axis-aligned integration box for the brute-force convolution.
struct ConvRegion {
    Vec3 lo, hi;
};

// Direct-summation quadrature of (kernel * density)(x) over the region with a
// singularity-exclusion ball of radius 2h around each test point and a local
// correction term: density(x) times the kernel average over the excluded
// ball (deterministic radial Gauss x octahedral angular sampling).
// Throws if a test point lies outside the region closer than 4h to it.
std::vector<double> brute_conv_oracle(const std::function<double(const Vec3&)>& kernel,
                                      const std::function<double(const Vec3&)>& density,
                                      const ConvRegion& region, double h,
                                      const std::vector<Vec3>& test_points);

struct ResidualReport {
    double absolute = 0;    // |i lambda_k v - nu lap v - zeta.grad v + grad p|
    double relative = 0;    // absolute / (sum of the four term magnitudes)
    double divergence = 0;  // |div v| / ||grad v||
};

// Finite-difference residual of the mode-k drift system at one point,
// 4th-order central stencils with step step_scale * |x|. The sampled pair
// must be smooth on the stencil; dist_to_singularity guards that.
ResidualReport pde_residual(const std::function<CVec3(const Vec3&)>& v,
                            const std::function<cplx(const Vec3&)>& p, int k, const Vec3& x,
                            const KernelParams& params,
                            double dist_to_singularity = std::numeric_limits<double>::infinity(),
                            double step_scale = 1e-3);

}  // namespace oseentp
