// Timing comparison of the serial reference path against the parallel batch
// path for the two hot kernels: mode-kernel evaluation over a point cloud and
// a single-layer potential sweep. Results also cross-check that both paths
// produce identical values (they share per-point code; only scheduling
// differs).

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "oseentp/mesh.hpp"
#include "oseentp/mode_kernel.hpp"
#include "oseentp/parallel.hpp"
#include "oseentp/params.hpp"
#include "oseentp/potentials.hpp"
#include "oseentp/scenario.hpp"

using namespace oseentp;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<Vec3> random_shell(std::size_t n, double r_min, double r_max) {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Vec3> pts;
    while (pts.size() < n) {
        Vec3 d{gauss(gen), gauss(gen), gauss(gen)};
        if (norm(d) < 1e-6) continue;
        pts.push_back(r_min * std::pow(r_max / r_min, uni(gen)) * normalized(d));
    }
    return pts;
}

double max_diff(const std::vector<CMat3>& a, const std::vector<CMat3>& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, norm_of(a[i] - b[i]));
    return m;
}

}  // namespace

int main(int argc, char** argv) {
    std::size_t n_points = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 20000;

    KernelParams p;
    p.zeta = Vec3{0.5, 0.0, 0.0};
    p.nu = 1.0;
    p.period = 1.0;
    p.n_modes = 2;
    ModeKernelCache cache(p);

    std::printf("threads available: %d\n", thread_count());
    std::vector<Vec3> pts = random_shell(n_points, 1.0, 32.0);

    auto t0 = std::chrono::steady_clock::now();
    std::vector<CMat3> serial = mode_velocity_batch(cache, pts, 1, ExecMode::serial);
    double ts = seconds_since(t0);
    t0 = std::chrono::steady_clock::now();
    std::vector<CMat3> parallel = mode_velocity_batch(cache, pts, 1, ExecMode::parallel);
    double tp = seconds_since(t0);
    std::printf("mode kernel, %zu points: serial %.3fs, parallel %.3fs, speedup %.2fx, "
                "max diff %.3g\n",
                pts.size(), ts, tp, ts / tp, max_diff(serial, parallel));

    // Layer-potential sweep: one far-field evaluation per target point.
    Scenario scn = make_flux_pair(p, 3).first;
    BoundaryData bdata = boundary_data(scn);
    std::vector<Vec3> targets = random_shell(64, 6.0, 24.0);
    auto layer = [&](const Vec3& x) {
        return single_layer_velocity(scn.mesh, bdata.traction, x, *scn.cache);
    };
    t0 = std::chrono::steady_clock::now();
    auto layer_serial = eval_batch(targets, layer, ExecMode::serial);
    ts = seconds_since(t0);
    t0 = std::chrono::steady_clock::now();
    auto layer_parallel = eval_batch(targets, layer, ExecMode::parallel);
    tp = seconds_since(t0);
    double ld = 0;
    for (std::size_t i = 0; i < targets.size(); ++i)
        for (int k = -p.n_modes; k <= p.n_modes; ++k)
            ld = std::max(ld, norm_of(layer_serial[i].coeff(k) - layer_parallel[i].coeff(k)));
    std::printf("traction layer, %zu targets x %zu nodes: serial %.3fs, parallel %.3fs, "
                "speedup %.2fx, max diff %.3g\n",
                targets.size(), scn.mesh.nodes.size(), ts, tp, ts / tp, ld);
    return 0;
}
