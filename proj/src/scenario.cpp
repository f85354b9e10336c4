#include "oseentp/scenario.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <utility>

#include "oseentp/kernels.hpp"
#include "oseentp/schema.hpp"

namespace oseentp {

namespace {

cplx flux_coeff(const FourierScalar& q, int k) {
    return std::abs(k) <= q.n_modes() ? q.coeff(k) : cplx{};
}

// out(d, i) = sum_j t[d](i, j) a_j; the gradient of the kernel-times-amplitude
// velocity with the derivative index first.
template <class TT>
CMat3 grad_times(const TT& t, const CVec3& a) {
    CMat3 g;
    for (int d = 0; d < 3; ++d) {
        CVec3 row = matvec(t[d], a);
        for (int i = 0; i < 3; ++i) g(d, i) = row[i];
    }
    return g;
}

}  // namespace

Singularity steady_oseenlet(const Vec3& y, const Vec3& strength) {
    Singularity s;
    s.kind = SingularityKind::steady_oseenlet;
    s.location = y;
    s.strength = strength;
    return s;
}

Singularity periodic_oseenlet(const Vec3& y, int mode, const CVec3& amplitude) {
    if (mode == 0)
        throw std::invalid_argument("periodic_oseenlet: mode 0 belongs to steady_oseenlet");
    Singularity s;
    s.kind = SingularityKind::periodic_oseenlet;
    s.location = y;
    s.mode = std::abs(mode);
    s.amplitude = mode > 0 ? amplitude : conj(amplitude);
    return s;
}

Singularity pulsating_source(const Vec3& y, FourierScalar flux) {
    Singularity s;
    s.kind = SingularityKind::pulsating_source;
    s.location = y;
    s.flux = std::move(flux);
    return s;
}

void Scenario::validate() const {
    params.validate();
    if (!(body_radius > 0)) throw std::invalid_argument("Scenario: body_radius must be positive");
    if (!cache) throw std::invalid_argument("Scenario: kernel cache not built");
    if (mesh.nodes.empty()) throw std::invalid_argument("Scenario: empty boundary mesh");
    for (const auto& s : singularities) {
        if (!(norm(s.location - body_center) < 0.8 * body_radius))
            throw std::invalid_argument("Scenario: singularity too close to the body surface");
        if (s.kind == SingularityKind::periodic_oseenlet &&
            (s.mode < 1 || s.mode > params.n_modes))
            throw std::invalid_argument("Scenario: oseenlet mode outside the truncation");
        if (s.kind == SingularityKind::pulsating_source) {
            if (s.flux.n_modes() > params.n_modes)
                throw std::invalid_argument("Scenario: flux series exceeds the mode truncation");
            if (!is_conj_symmetric(s.flux, 1e-12))
                throw std::invalid_argument("Scenario: flux series must be real-valued");
        }
    }
}

Scenario make_scenario(const KernelParams& params, std::vector<Singularity> singularities,
                       const Vec3& body_center, double body_radius, int mesh_level,
                       QuadRule rule) {
    Scenario scn;
    scn.params = params;
    scn.body_center = body_center;
    scn.body_radius = body_radius;
    scn.mesh_level = mesh_level;
    scn.singularities = std::move(singularities);
    scn.mesh = sphere_mesh(body_center, body_radius, mesh_level, rule);
    scn.cache = std::make_shared<ModeKernelCache>(params);
    scn.validate();
    return scn;
}

double min_singularity_distance(const Scenario& scn, const Vec3& x) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& s : scn.singularities) d = std::min(d, norm(x - s.location));
    return d;
}

CVec3 eval_velocity_mode(const Scenario& scn, int k, const Vec3& x) {
    if (std::abs(k) > scn.params.n_modes)
        throw std::invalid_argument("eval_velocity_mode: mode outside the truncation");
    CVec3 v{};
    for (const auto& s : scn.singularities) {
        Vec3 z = x - s.location;
        switch (s.kind) {
            case SingularityKind::steady_oseenlet:
                if (k == 0) v += matvec(steady_velocity(z, scn.params), CVec3(s.strength));
                break;
            case SingularityKind::periodic_oseenlet:
                if (k == s.mode)
                    v += matvec(mode_velocity(*scn.cache, z, k), s.amplitude);
                else if (k == -s.mode)
                    v += matvec(mode_velocity(*scn.cache, z, k), conj(s.amplitude));
                break;
            case SingularityKind::pulsating_source:
                v += flux_coeff(s.flux, k) * CVec3(pressure_P(z));
                break;
        }
    }
    return v;
}

cplx eval_pressure_mode(const Scenario& scn, int k, const Vec3& x) {
    if (std::abs(k) > scn.params.n_modes)
        throw std::invalid_argument("eval_pressure_mode: mode outside the truncation");
    cplx p{};
    for (const auto& s : scn.singularities) {
        Vec3 z = x - s.location;
        switch (s.kind) {
            case SingularityKind::steady_oseenlet:
                if (k == 0) p += dot(pressure_P(z), s.strength);
                break;
            case SingularityKind::periodic_oseenlet:
                if (k == s.mode)
                    p += dot(CVec3(pressure_P(z)), s.amplitude);
                else if (k == -s.mode)
                    p += dot(CVec3(pressure_P(z)), conj(s.amplitude));
                break;
            case SingularityKind::pulsating_source: {
                cplx qk = flux_coeff(s.flux, k);
                if (qk != cplx{})
                    p += qk * (cplx(0.0, scn.params.lambda(k)) * laplace_E(z) +
                               dot(scn.params.zeta, pressure_P(z)));
                break;
            }
        }
    }
    return p;
}

CMat3 eval_grad_velocity_mode(const Scenario& scn, int k, const Vec3& x) {
    if (std::abs(k) > scn.params.n_modes)
        throw std::invalid_argument("eval_grad_velocity_mode: mode outside the truncation");
    CMat3 g{};
    for (const auto& s : scn.singularities) {
        Vec3 z = x - s.location;
        switch (s.kind) {
            case SingularityKind::steady_oseenlet:
                if (k == 0)
                    g += grad_times(steady_velocity_grad(z, scn.params), CVec3(s.strength));
                break;
            case SingularityKind::periodic_oseenlet:
                if (k == s.mode)
                    g += grad_times(mode_velocity_grad(*scn.cache, z, k), s.amplitude);
                else if (k == -s.mode)
                    g += grad_times(mode_velocity_grad(*scn.cache, z, k), conj(s.amplitude));
                break;
            case SingularityKind::pulsating_source: {
                cplx qk = flux_coeff(s.flux, k);
                if (qk != cplx{}) g += qk * CMat3(grad_P(z));
                break;
            }
        }
    }
    return g;
}

FourierField eval_velocity_modes(const Scenario& scn, const Vec3& x) {
    FourierField f(scn.params.n_modes);
    for (int k = -scn.params.n_modes; k <= scn.params.n_modes; ++k)
        f.coeff(k) = eval_velocity_mode(scn, k, x);
    return f;
}

FourierScalar eval_pressure_modes(const Scenario& scn, const Vec3& x) {
    FourierScalar f(scn.params.n_modes);
    for (int k = -scn.params.n_modes; k <= scn.params.n_modes; ++k)
        f.coeff(k) = eval_pressure_mode(scn, k, x);
    return f;
}

FourierTensor eval_grad_velocity_modes(const Scenario& scn, const Vec3& x) {
    FourierTensor f(scn.params.n_modes);
    for (int k = -scn.params.n_modes; k <= scn.params.n_modes; ++k)
        f.coeff(k) = eval_grad_velocity_mode(scn, k, x);
    return f;
}

Vec3 eval_velocity(const Scenario& scn, double t, const Vec3& x) {
    return real(eval_velocity_modes(scn, x).eval(t, scn.params.period));
}

double eval_pressure(const Scenario& scn, double t, const Vec3& x) {
    return eval_pressure_modes(scn, x).eval(t, scn.params.period).real();
}

Mat3 eval_grad_velocity(const Scenario& scn, double t, const Vec3& x) {
    return real(eval_grad_velocity_modes(scn, x).eval(t, scn.params.period));
}

BoundaryData boundary_data(const Scenario& scn) {
    scn.validate();
    const int N = scn.params.n_modes;
    const double nu = scn.params.nu;
    BoundaryData bd;
    bd.n_modes = N;
    bd.period = scn.params.period;
    bd.velocity.assign(scn.mesh.nodes.size(), FourierField(N));
    bd.traction.assign(scn.mesh.nodes.size(), FourierField(N));
    parallel_for(scn.mesh.nodes.size(), [&](std::size_t i) {
        const QuadNode& node = scn.mesh.nodes[i];
        Vec3 n = -1.0 * node.normal;  // normal out of the fluid
        FourierField vel(N), trac(N);
        for (int k = -N; k <= N; ++k) {
            CVec3 v = eval_velocity_mode(scn, k, node.y);
            cplx p = eval_pressure_mode(scn, k, node.y);
            CMat3 g = eval_grad_velocity_mode(scn, k, node.y);
            CVec3 t{};
            for (int c = 0; c < 3; ++c) {
                cplx s{};
                for (int a = 0; a < 3; ++a) s += (g(a, c) + g(c, a)) * n[a];
                t[c] = nu * s - p * n[c];
            }
            vel.coeff(k) = v;
            trac.coeff(k) = t;
        }
        bd.velocity[i] = vel;
        bd.traction[i] = trac;
    });
    return bd;
}

std::pair<Scenario, Scenario> make_flux_pair(const KernelParams& params, int mesh_level) {
    std::vector<Singularity> common;
    common.push_back(steady_oseenlet({-0.2, 0.1, 0.0}, {0.4, -0.3, 0.7}));
    common.push_back(periodic_oseenlet(
        {0.1, -0.15, 0.2}, 1, CVec3{cplx(0.3, 0.1), cplx(0.5, -0.2), cplx(-0.2, 0.05)}));

    FourierScalar q_time(1);  // 0.5 + 0.5 cos(lambda_1 t)
    q_time.coeff(0) = 0.5;
    q_time.coeff(1) = 0.25;
    q_time.coeff(-1) = 0.25;
    FourierScalar q_const(0);
    q_const.coeff(0) = 0.5;

    std::vector<Singularity> with_time = common;
    with_time.push_back(pulsating_source({0.35, 0.0, 0.0}, q_time));
    std::vector<Singularity> with_const = std::move(common);
    with_const.push_back(pulsating_source({0.35, 0.0, 0.0}, q_const));

    return {make_scenario(params, std::move(with_time), {}, 1.0, mesh_level),
            make_scenario(params, std::move(with_const), {}, 1.0, mesh_level)};
}

namespace {

using schema::json;

FourierScalar parse_flux(const json& j, const std::string& where) {
    schema::reject_unknown_keys(j, {"const", "cos", "sin"}, where);
    std::vector<double> c, s;
    if (j.contains("cos")) c = schema::get_number_list(j["cos"], where + ".cos");
    if (j.contains("sin")) s = schema::get_number_list(j["sin"], where + ".sin");
    int n = static_cast<int>(std::max(c.size(), s.size()));
    FourierScalar q(n);
    if (j.contains("const")) q.coeff(0) = schema::get_number(j["const"], where + ".const");
    for (int m = 1; m <= n; ++m) {
        double cm = m <= static_cast<int>(c.size()) ? c[static_cast<std::size_t>(m - 1)] : 0.0;
        double sm = m <= static_cast<int>(s.size()) ? s[static_cast<std::size_t>(m - 1)] : 0.0;
        q.coeff(m) = 0.5 * cplx(cm, -sm);
        q.coeff(-m) = 0.5 * cplx(cm, sm);
    }
    return q;
}

json flux_to_json(const FourierScalar& q) {
    json j = json::object();
    j["const"] = q.coeff(0).real();
    json c = json::array(), s = json::array();
    for (int m = 1; m <= q.n_modes(); ++m) {
        c.push_back(2.0 * q.coeff(m).real());
        s.push_back(-2.0 * q.coeff(m).imag());
    }
    j["cos"] = c;
    j["sin"] = s;
    return j;
}

Singularity parse_singularity(const json& j, const std::string& where) {
    std::string type = schema::get_string(schema::require_key(j, "type", where), where + ".type");
    Vec3 y = schema::get_vec3(schema::require_key(j, "location", where), where + ".location");
    if (type == "steady_oseenlet") {
        schema::reject_unknown_keys(j, {"type", "location", "strength"}, where);
        return steady_oseenlet(
            y, schema::get_vec3(schema::require_key(j, "strength", where), where + ".strength"));
    }
    if (type == "periodic_oseenlet") {
        schema::reject_unknown_keys(j, {"type", "location", "mode", "strength_re", "strength_im"},
                                    where);
        int mode = schema::get_int(schema::require_key(j, "mode", where), where + ".mode");
        Vec3 re = schema::get_vec3(schema::require_key(j, "strength_re", where),
                                   where + ".strength_re");
        Vec3 im{};
        if (j.contains("strength_im"))
            im = schema::get_vec3(j["strength_im"], where + ".strength_im");
        CVec3 a;
        for (int i = 0; i < 3; ++i) a[i] = cplx(re[i], im[i]);
        return periodic_oseenlet(y, mode, a);
    }
    if (type == "pulsating_source") {
        schema::reject_unknown_keys(j, {"type", "location", "flux"}, where);
        return pulsating_source(
            y, parse_flux(schema::require_key(j, "flux", where), where + ".flux"));
    }
    throw SchemaError(where + ": unknown singularity type \"" + type + "\"");
}

json singularity_to_json(const Singularity& s) {
    json j = json::object();
    j["location"] = {s.location[0], s.location[1], s.location[2]};
    switch (s.kind) {
        case SingularityKind::steady_oseenlet:
            j["type"] = "steady_oseenlet";
            j["strength"] = {s.strength[0], s.strength[1], s.strength[2]};
            break;
        case SingularityKind::periodic_oseenlet:
            j["type"] = "periodic_oseenlet";
            j["mode"] = s.mode;
            j["strength_re"] = {s.amplitude[0].real(), s.amplitude[1].real(),
                                s.amplitude[2].real()};
            j["strength_im"] = {s.amplitude[0].imag(), s.amplitude[1].imag(),
                                s.amplitude[2].imag()};
            break;
        case SingularityKind::pulsating_source:
            j["type"] = "pulsating_source";
            j["flux"] = flux_to_json(s.flux);
            break;
    }
    return j;
}

QuadRule parse_quad_rule(const std::string& name, const std::string& where) {
    if (name == "centroid") return QuadRule::centroid;
    if (name == "three_point") return QuadRule::three_point;
    throw SchemaError(where + ": unknown quadrature rule \"" + name + "\"");
}

}  // namespace

Scenario load_scenario(const std::string& path) {
    json j = schema::parse_file(path);
    schema::reject_unknown_keys(j, {"params", "body", "singularities"}, path);

    const json& jp = schema::require_key(j, "params", path);
    schema::reject_unknown_keys(jp, {"zeta", "nu", "period", "n_modes"}, path + ".params");
    KernelParams p;
    p.zeta = schema::get_vec3(schema::require_key(jp, "zeta", path), path + ".params.zeta");
    p.nu = schema::get_number(schema::require_key(jp, "nu", path), path + ".params.nu");
    p.period = schema::get_number(schema::require_key(jp, "period", path), path + ".params.period");
    p.n_modes = schema::get_int(schema::require_key(jp, "n_modes", path), path + ".params.n_modes");

    const json& jb = schema::require_key(j, "body", path);
    schema::reject_unknown_keys(jb, {"center", "radius", "mesh_level", "quad_rule"},
                                path + ".body");
    Vec3 center = schema::get_vec3(schema::require_key(jb, "center", path), path + ".body.center");
    double radius =
        schema::get_number(schema::require_key(jb, "radius", path), path + ".body.radius");
    int level = 3;
    if (jb.contains("mesh_level")) level = schema::get_int(jb["mesh_level"], path + ".body.mesh_level");
    QuadRule rule = QuadRule::three_point;
    if (jb.contains("quad_rule"))
        rule = parse_quad_rule(schema::get_string(jb["quad_rule"], path + ".body.quad_rule"),
                               path + ".body.quad_rule");

    const json& js = schema::require_key(j, "singularities", path);
    if (!js.is_array()) throw SchemaError(path + ".singularities: expected an array");

    try {
        std::vector<Singularity> sings;
        for (std::size_t i = 0; i < js.size(); ++i)
            sings.push_back(
                parse_singularity(js[i], path + ".singularities[" + std::to_string(i) + "]"));
        p.validate();
        return make_scenario(p, std::move(sings), center, radius, level, rule);
    } catch (const std::invalid_argument& e) {
        throw SchemaError(path + ": " + e.what());
    }
}

void save_scenario(const Scenario& scn, const std::string& path) {
    json j;
    j["params"] = {{"zeta", {scn.params.zeta[0], scn.params.zeta[1], scn.params.zeta[2]}},
                   {"nu", scn.params.nu},
                   {"period", scn.params.period},
                   {"n_modes", scn.params.n_modes}};
    j["body"] = {{"center", {scn.body_center[0], scn.body_center[1], scn.body_center[2]}},
                 {"radius", scn.body_radius},
                 {"mesh_level", scn.mesh_level},
                 {"quad_rule", scn.mesh.rule == QuadRule::centroid ? "centroid" : "three_point"}};
    json arr = json::array();
    for (const auto& s : scn.singularities) arr.push_back(singularity_to_json(s));
    j["singularities"] = arr;

    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_scenario: cannot open " + path + " for writing");
    out << j.dump(2) << "\n";
}

}  // namespace oseentp
