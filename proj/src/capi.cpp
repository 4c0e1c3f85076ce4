#include "osmodes/osmodes.h"

#include <memory>
#include <string>

#include "osmodes/airy.hpp"
#include "osmodes/collocation.hpp"
#include "osmodes/dispersion.hpp"
#include "osmodes/errors.hpp"

using namespace osm;

struct osm_profile {
  ShearProfile p;
};

struct osm_context {
  std::unique_ptr<OrrContext> ctx;
};

struct osm_modes {
  const OrrContext* ctx;
  OrrModeSet set;
};

struct osm_branch_scan {
  BranchScan scan;
};

namespace {

thread_local std::string last_error;

template <class F>
osm_status guarded(F&& f) {
  try {
    f();
    last_error.clear();
    return OSM_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return static_cast<osm_status>(e.code());
  } catch (const std::exception& e) {
    last_error = e.what();
    return OSM_INTERNAL_ERROR;
  }
}

cplx in(osm_complex z) { return {z.re, z.im}; }
osm_complex out(cplx z) { return {z.real(), z.imag()}; }

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, what);
}

NumericsOptions numerics(const osm_numerics* o) {
  NumericsOptions n;
  if (!o) return n;
  n.series_tol = o->series_tol;
  n.iter_tol = o->iter_tol;
  n.max_iter = o->max_iter;
  n.solver = o->solver == OSM_SOLVER_NEUMANN ? LinearSolver::Neumann
             : o->solver == OSM_SOLVER_GMRES ? LinearSolver::Gmres
                                             : LinearSolver::Auto;
  n.max_alpha = o->max_alpha;
  n.mesh.refine = o->mesh_refine;
  return n;
}

DispersionOptions dispersion(const osm_numerics* o) {
  DispersionOptions d;
  d.numerics = numerics(o);
  if (!o) return d;
  d.reduced = o->reduced != 0;
  d.tol_dc = o->tol_dc;
  d.tol_residual = o->tol_residual;
  d.max_iter = o->max_secant;
  return d;
}

osm_collocation_result collocation_result(const std::optional<LeadingMode>& m) {
  osm_collocation_result r{};
  if (m) {
    r.found = 1;
    r.c = out(m->c);
    r.pair_distance = m->pair_distance;
    r.self_converged = m->self_converged ? 1 : 0;
  }
  return r;
}

}  // namespace

extern "C" {

const char* osm_status_name(osm_status s) {
  if (s == OSM_INTERNAL_ERROR) return "InternalError";
  return error_name(static_cast<ErrorCode>(s));
}

const char* osm_last_error(void) { return last_error.c_str(); }

void osm_numerics_default(osm_numerics* o) {
  if (!o) return;
  NumericsOptions n;
  DispersionOptions d;
  o->series_tol = n.series_tol;
  o->iter_tol = n.iter_tol;
  o->max_iter = n.max_iter;
  o->solver = OSM_SOLVER_AUTO;
  o->max_alpha = n.max_alpha;
  o->mesh_refine = n.mesh.refine;
  o->reduced = 0;
  o->tol_dc = d.tol_dc;
  o->tol_residual = d.tol_residual;
  o->max_secant = d.max_iter;
}

osm_status osm_profile_create(const char* spec, osm_profile** res) {
  return guarded([&] {
    require(spec && res, "null argument");
    *res = new osm_profile{profile_from_spec(spec)};
  });
}

void osm_profile_destroy(osm_profile* p) { delete p; }

const char* osm_profile_name(const osm_profile* p) { return p ? p->p.name().c_str() : ""; }

osm_status osm_profile_eval(const osm_profile* p, osm_complex z, osm_complex r[5]) {
  return guarded([&] {
    require(p && r, "null argument");
    auto u = p->p.eval(in(z));
    for (int k = 0; k < 5; ++k) r[k] = out(u[k]);
  });
}

osm_status osm_critical_point(const osm_profile* p, osm_complex c, osm_complex guess, osm_complex* z_c,
                              double* residual) {
  return guarded([&] {
    require(p && z_c, "null argument");
    CriticalPoint cp = find_critical_point(p->p, in(c), in(guess));
    *z_c = out(cp.z_c);
    if (residual) *residual = cp.residual;
  });
}

osm_status osm_airy_eval(int kind, int order, osm_complex z, osm_complex* r) {
  return guarded([&] {
    require(r && (kind == 0 || kind == 1), "kind must be 0 (Ai) or 1 (Ci)");
    *r = out(airy_eval(kind == 0 ? AiryKind::Ai : AiryKind::Ci, order, in(z)));
  });
}

osm_status osm_airy_log_eval(int kind, int order, osm_complex z, double* log_modulus, osm_complex* phase) {
  return guarded([&] {
    require(log_modulus && phase && (kind == 0 || kind == 1), "kind must be 0 (Ai) or 1 (Ci)");
    LogValue v = airy_log_eval(kind == 0 ? AiryKind::Ai : AiryKind::Ci, order, in(z));
    *log_modulus = v.log_modulus;
    *phase = out(v.phase);
  });
}

osm_status osm_c_ai_ratio(osm_complex y, osm_complex* r) {
  return guarded([&] {
    require(r, "null argument");
    *r = out(c_ai_ratio(in(y)));
  });
}

osm_status osm_context_create(const osm_profile* p, double alpha, double R, osm_complex c, const osm_numerics* opt,
                              osm_context** res) {
  return guarded([&] {
    require(p && res, "null argument");
    auto ctx = std::make_unique<OrrContext>(p->p, alpha, R, in(c), numerics(opt));
    *res = new osm_context{std::move(ctx)};
  });
}

void osm_context_destroy(osm_context* ctx) { delete ctx; }

size_t osm_context_size(const osm_context* ctx) { return ctx ? ctx->ctx->mesh()->size() : 0; }

osm_complex osm_context_node(const osm_context* ctx, size_t i) {
  if (!ctx || i >= ctx->ctx->mesh()->size()) return {0.0, 0.0};
  return out(ctx->ctx->mesh()->node(i));
}

osm_complex osm_context_critical_point(const osm_context* ctx) {
  return ctx ? out(ctx->ctx->critical_point().z_c) : osm_complex{0.0, 0.0};
}

osm_complex osm_context_delta(const osm_context* ctx) { return ctx ? out(ctx->ctx->delta()) : osm_complex{0.0, 0.0}; }

osm_status osm_context_green_slice(const osm_context* ctx, osm_complex z0, int part, int k, osm_complex* r,
                                   size_t n) {
  return guarded([&] {
    require(ctx && r, "null argument");
    require(part >= 0 && part <= 2, "part must be 0, 1 or 2");
    require(k >= 0 && k <= 3, "derivative order must lie in [0, 3]");
    const auto& mesh = *ctx->ctx->mesh();
    require(n == mesh.size(), "output length must equal the mesh size");
    size_t iz = mesh.nearest(in(z0));
    for (size_t ix = 0; ix < n; ++ix)
      r[ix] = out(ctx->ctx->critical().green(ix, iz, static_cast<GreenPart>(part), k));
  });
}

osm_status osm_context_contraction(const osm_context* ctx, double* kappa) {
  return guarded([&] {
    require(ctx && kappa, "null argument");
    *kappa = measure_contraction(*ctx->ctx).kappa;
  });
}

osm_status osm_modes_build(const osm_context* ctx, osm_modes** res) {
  return guarded([&] {
    require(ctx && res, "null argument");
    auto m = std::make_unique<osm_modes>();
    m->ctx = ctx->ctx.get();
    m->set = build_modes(*ctx->ctx);
    *res = m.release();
  });
}

void osm_modes_destroy(osm_modes* m) { delete m; }

void osm_modes_ratios(const osm_modes* m, osm_complex K[4]) {
  if (!m || !K) return;
  K[0] = out(m->set.K1);
  K[1] = out(m->set.K2);
  K[2] = out(m->set.K3);
  K[3] = out(m->set.K4);
}

size_t osm_modes_size(const osm_modes* m) { return m ? m->set.phi[0].size() : 0; }

osm_status osm_modes_value(const osm_modes* m, int j, int k, size_t i, osm_complex* r) {
  return guarded([&] {
    require(m && r, "null argument");
    require(j >= 1 && j <= 4 && k >= 0 && k <= 3, "mode index 1..4, order 0..3");
    require(i < m->set.phi[j - 1].size(), "node index out of range");
    *r = out(m->set.phi[j - 1].d[k][i]);
  });
}

double osm_modes_log_scale(const osm_modes* m, int j) {
  if (!m || j < 1 || j > 4) return 0.0;
  return m->set.phi[j - 1].log_scale;
}

osm_status osm_modes_residual(const osm_modes* m, int j, double* relative) {
  return guarded([&] {
    require(m && relative, "null argument");
    require(j >= 1 && j <= 4, "mode index 1..4");
    const auto& phi = m->set.phi[j - 1];
    CVec r = m->ctx->orr_residual(phi);
    double rmax = 0.0;
    for (cplx v : r) rmax = std::max(rmax, std::abs(v));
    *relative = rmax / phi.sup(0);
  });
}

osm_status osm_modes_at(const osm_modes* m, int j, double z, osm_complex r[2]) {
  return guarded([&] {
    require(m && r, "null argument");
    require(j >= 1 && j <= 4, "mode index 1..4");
    require(z >= 0.0 && z <= 1.0, "z must lie in [0, 1]");
    auto v = continue_mode(*m->ctx, m->set.phi[j - 1], z);
    r[0] = out(v[0]);
    r[1] = out(v[1]);
  });
}

osm_status osm_modes_determinant(const osm_modes* m, osm_complex* det, double* relative) {
  return guarded([&] {
    require(m, "null argument");
    if (det) *det = out(dispersion_det(m->set));
    if (relative) *relative = dispersion_det_relative(m->set);
  });
}

osm_status osm_solve_eigenvalue(const osm_profile* p, double alpha, double R, const osm_complex* seed,
                                const osm_numerics* opt, osm_eigen_result* res) {
  return guarded([&] {
    require(p && res, "null argument");
    std::optional<cplx> s;
    if (seed) s = in(*seed);
    DispersionResult d = solve_eigenvalue(p->p, alpha, R, s, dispersion(opt));
    res->alpha = alpha;
    res->R = R;
    res->c = out(d.c);
    res->growth_rate = d.growth_rate;
    res->residual = d.residual;
    res->iterations = d.iterations;
  });
}

osm_status osm_scan_branch(const osm_profile* p, double R, double beta, const double* A, size_t nA, double rel_tol,
                           const osm_numerics* opt, osm_branch_scan** res) {
  return guarded([&] {
    require(p && A && res && nA > 0, "null argument");
    std::vector<double> av(A, A + nA);
    for (size_t i = 1; i < nA; ++i) require(av[i] > av[i - 1], "A values must increase");
    *res = new osm_branch_scan{scan_branch(p->p, R, beta, av, rel_tol, dispersion(opt))};
  });
}

void osm_branch_scan_destroy(osm_branch_scan* s) { delete s; }

size_t osm_branch_scan_points(const osm_branch_scan* s) { return s ? s->scan.points.size() : 0; }

osm_branch_point osm_branch_scan_point(const osm_branch_scan* s, size_t i) {
  osm_branch_point r{};
  if (!s || i >= s->scan.points.size()) return r;
  const auto& q = s->scan.points[i];
  r.A = q.A;
  r.alpha = q.alpha;
  r.converged = q.converged ? 1 : 0;
  r.c = out(q.c);
  r.residual = q.residual;
  return r;
}

size_t osm_branch_scan_crossings(const osm_branch_scan* s) { return s ? s->scan.crossings.size() : 0; }

double osm_branch_scan_crossing(const osm_branch_scan* s, size_t i, osm_complex* c) {
  if (!s || i >= s->scan.crossings.size()) return 0.0;
  if (c) *c = out(s->scan.crossing_c[i]);
  return s->scan.crossings[i];
}

const char* osm_branch_scan_status(const osm_branch_scan* s) { return s ? s->scan.status.c_str() : ""; }

osm_status osm_growth_rates(const osm_profile* p, const double* betas, size_t nb, const double* Rs, size_t nR,
                            double A, int workers, const osm_numerics* opt, osm_growth_row* rows) {
  return guarded([&] {
    require(p && betas && Rs && rows, "null argument");
    auto r = scan_growth_rates(p->p, std::vector<double>(betas, betas + nb), std::vector<double>(Rs, Rs + nR), A,
                               workers, dispersion(opt));
    for (size_t i = 0; i < r.size(); ++i) {
      rows[i].beta = r[i].beta;
      rows[i].R = r[i].R;
      rows[i].alpha = r[i].alpha;
      rows[i].converged = r[i].converged ? 1 : 0;
      rows[i].c = out(r[i].c);
      rows[i].growth_rate = r[i].growth_rate;
    }
  });
}

osm_status osm_fit_slope(const double* x, const double* y, size_t n, double* slope) {
  return guarded([&] {
    require(x && y && slope, "null argument");
    *slope = fit_slope(std::vector<double>(x, x + n), std::vector<double>(y, y + n));
  });
}

void osm_parallel_for(size_t n, int workers, void (*fn)(size_t, void*), void* user) {
  parallel_for(n, workers, [&](size_t i) { fn(i, user); });
}

osm_status osm_collocation_leading(const osm_profile* p, double alpha, double R, int N, int dN, int unstable_only,
                                   osm_collocation_result* res) {
  return guarded([&] {
    require(p && res, "null argument");
    *res = collocation_result(leading_mode(p->p, alpha, R, N, dN, unstable_only != 0));
  });
}

osm_status osm_collocation_nearest(const osm_profile* p, double alpha, double R, osm_complex target, int N, int dN,
                                   osm_collocation_result* res) {
  return guarded([&] {
    require(p && res, "null argument");
    *res = collocation_result(nearest_mode(p->p, alpha, R, in(target), N, dN));
  });
}

}  // extern "C"
