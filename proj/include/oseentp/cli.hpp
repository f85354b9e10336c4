#pragma once

// Command-line front end: binds JSON configuration to the kernel, scenario,
// representation, and decay-fit machinery and emits CSV/SVG/markdown
// artifacts. Exit codes: 0 success, 1 numeric tolerance failure in a check
// command, 2 configuration or schema violation.

namespace oseentp {

// Fixed enumeration of the quantitative claims a result row can certify;
// every CSV row the CLI emits carries one of these tags so the report
// generator can group rows by claim.
enum class ClaimTag {
    kernel_mode_residual,    // kernel pairs solve their PDE (finite differences)
    kernel_fft_oracle,       // mode kernel vs discrete-symbol FFT inversion
    kernel_zeta0_closed,     // mode kernel vs zero-drift closed form
    steady_wake_decay,       // steady velocity: slow wake / fast transverse decay
    steady_far_pressure,     // steady pressure dipole decay
    periodic_kernel_decay,   // time norm of the oscillating kernel ~ r^-3
    repr_velocity,           // boundary+volume integrals reproduce the velocity
    repr_pressure,           // ... and the pressure
    flux_osc_velocity,       // oscillating net flux: periodic velocity ~ r^-2
    flux_osc_pressure,       // oscillating net flux: periodic pressure ~ r^-1
    flux_const_velocity,     // constant net flux: periodic velocity ~ r^-3
    flux_const_pressure,     // constant net flux: periodic pressure ~ r^-2
    periodic_far_velocity,   // generic scenario, periodic velocity decay
    periodic_far_pressure,   // generic scenario, periodic pressure decay
    remainder_velocity,      // expansion remainder order (velocity)
    remainder_pressure,      // expansion remainder order (pressure)
    conv_bound_stability,    // convolution bound stable under domain doubling
    conv_log_sharpness,      // boundary-case bound needs its log factor
};

const char* claim_name(ClaimTag tag);

int run_cli(int argc, const char* const* argv);

}  // namespace oseentp
