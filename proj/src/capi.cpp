#include "bogo/bogo_c.h"

#include <cstring>
#include <string>

#include "bogo/gibbs.hpp"
#include "bogo/harness.hpp"
#include "bogo/solver.hpp"
#include "json.hpp"

using namespace bogo;

namespace {

thread_local std::string g_last_error;

int code_of(Errc c) {
  switch (c) {
    case Errc::invalid_argument: return BOGO_EINVAL;
    case Errc::domain: return BOGO_EDOMAIN;
    case Errc::parse: return BOGO_EPARSE;
    case Errc::assertion: return BOGO_EASSERT;
    case Errc::regime: return BOGO_EREGIME;
    case Errc::no_convergence: return BOGO_ENOCONV;
    case Errc::runtime: return BOGO_ERUNTIME;
  }
  return BOGO_ERUNTIME;
}

template <class F>
bogo_status guarded(F&& body) {
  try {
    body();
    return BOGO_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return code_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return BOGO_ERUNTIME;
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

Role role_of(int role) {
  switch (role) {
    case BOGO_ROLE_QUASI_OBSERVABLE: return Role::quasi_observable;
    case BOGO_ROLE_OBSERVABLE: return Role::observable;
    case BOGO_ROLE_MEASURE: return Role::measure;
    case BOGO_ROLE_CORRELATION: return Role::correlation;
    case BOGO_ROLE_COEFFICIENTS: return Role::coefficients;
  }
  fail(Errc::invalid_argument, "unknown table role");
}

Field field_from(const bogo_space* s, const double* re, const double* im);

}  // namespace

struct bogo_space {
  SiteSpace impl;
};
struct bogo_table {
  SetFunction impl;
};
struct bogo_potential {
  PairPotential impl;
};

namespace {
Field field_from(const bogo_space* s, const double* re, const double* im) {
  int n = s->impl.size();
  Field f = Field::zeros(n);
  for (int i = 0; i < n; ++i) f.value[i] = cplx(re ? re[i] : 0.0, im ? im[i] : 0.0);
  return f;
}
}  // namespace

extern "C" {

const char* bogo_version(void) { return "0.1.0"; }
const char* bogo_last_error(void) { return g_last_error.c_str(); }
void bogo_string_free(char* s) { delete[] s; }

bogo_status bogo_space_create(int n, const double* sigma, const double* pos, int dim, bogo_space** out) {
  return guarded([&] {
    if (!sigma || !out) fail(Errc::invalid_argument, "bogo_space_create: null argument");
    SiteSpace s;
    s.dim = pos ? dim : 1;
    for (int i = 0; i < n; ++i) {
      s.ids.push_back(i);
      s.sigma.push_back(sigma[i]);
      std::array<double, 3> p{static_cast<double>(i), 0, 0};
      if (pos)
        for (int d = 0; d < dim; ++d) p[d] = pos[i * dim + d];
      s.pos.push_back(p);
    }
    s.validate();
    *out = new bogo_space{std::move(s)};
  });
}

bogo_status bogo_space_grid1d(int n, double spacing, double z, bogo_space** out) {
  return guarded([&] {
    if (!out) fail(Errc::invalid_argument, "bogo_space_grid1d: null output");
    *out = new bogo_space{SiteSpace::line(n, spacing, z)};
  });
}

void bogo_space_free(bogo_space* s) { delete s; }
int bogo_space_size(const bogo_space* s) { return s ? s->impl.size() : 0; }

bogo_status bogo_table_create(const bogo_space* space, int role, bogo_table** out) {
  return guarded([&] {
    if (!space || !out) fail(Errc::invalid_argument, "bogo_table_create: null argument");
    *out = new bogo_table{SetFunction::full(space->impl, role_of(role))};
  });
}

bogo_status bogo_table_set(bogo_table* t, uint32_t subset, double re, double im) {
  return guarded([&] {
    if (!t) fail(Errc::invalid_argument, "bogo_table_set: null table");
    if (subset >= t->impl.table_size()) fail(Errc::domain, "bogo_table_set: subset outside the window");
    t->impl[subset] = cplx(re, im);
  });
}

bogo_status bogo_table_get(const bogo_table* t, uint32_t subset, double* re, double* im) {
  return guarded([&] {
    if (!t || !re || !im) fail(Errc::invalid_argument, "bogo_table_get: null argument");
    if (subset >= t->impl.table_size()) fail(Errc::domain, "bogo_table_get: subset outside the window");
    *re = t->impl[subset].real();
    *im = t->impl[subset].imag();
  });
}

int bogo_table_window_size(const bogo_table* t) { return t ? t->impl.window_size() : 0; }
void bogo_table_free(bogo_table* t) { delete t; }

bogo_status bogo_table_to_json(const bogo_table* t, const bogo_space* space, char** out) {
  return guarded([&] {
    if (!t || !space || !out) fail(Errc::invalid_argument, "bogo_table_to_json: null argument");
    *out = dup_string(t->impl.to_json(space->impl));
  });
}

bogo_status bogo_table_from_json(const bogo_space* space, const char* text, int role, bogo_table** out) {
  return guarded([&] {
    if (!space || !text || !out) fail(Errc::invalid_argument, "bogo_table_from_json: null argument");
    *out = new bogo_table{SetFunction::from_json(space->impl, text, role_of(role))};
  });
}

bogo_status bogo_k_transform(const bogo_table* g, uint32_t gamma, double* re, double* im) {
  return guarded([&] {
    if (!g || !re || !im) fail(Errc::invalid_argument, "bogo_k_transform: null argument");
    cplx v = k_transform(g->impl, gamma);
    *re = v.real();
    *im = v.imag();
  });
}

bogo_status bogo_k_transform_table(const bogo_table* g, bogo_table** out) {
  return guarded([&] {
    if (!g || !out) fail(Errc::invalid_argument, "bogo_k_transform_table: null argument");
    *out = new bogo_table{k_transform_table(g->impl)};
  });
}

bogo_status bogo_k_inverse(const bogo_table* f, bogo_table** out) {
  return guarded([&] {
    if (!f || !out) fail(Errc::invalid_argument, "bogo_k_inverse: null argument");
    *out = new bogo_table{k_inverse(f->impl)};
  });
}

bogo_status bogo_lebesgue_poisson_integral(const bogo_table* g, const bogo_space* space, uint32_t window,
                                           double* re, double* im) {
  return guarded([&] {
    if (!g || !space || !re || !im) fail(Errc::invalid_argument, "bogo_lebesgue_poisson_integral: null");
    cplx v = lebesgue_poisson_integral(g->impl, space->impl, window);
    *re = v.real();
    *im = v.imag();
  });
}

bogo_status bogo_correlation_from_measure(const bogo_table* mu, const bogo_space* space, bogo_table** out) {
  return guarded([&] {
    if (!mu || !space || !out) fail(Errc::invalid_argument, "bogo_correlation_from_measure: null");
    *out = new bogo_table{correlation_from_measure(mu->impl, space->impl)};
  });
}

bogo_status bogo_measure_from_correlation(const bogo_table* k, const bogo_space* space, bogo_table** out) {
  return guarded([&] {
    if (!k || !space || !out) fail(Errc::invalid_argument, "bogo_measure_from_correlation: null");
    *out = new bogo_table{measure_from_correlation(k->impl, space->impl)};
  });
}

bogo_status bogo_bogoliubov_eval(const bogo_table* src, const bogo_space* space, const double* theta_re,
                                 const double* theta_im, double* re, double* im) {
  return guarded([&] {
    if (!src || !space || !theta_re || !re || !im)
      fail(Errc::invalid_argument, "bogo_bogoliubov_eval: null argument");
    cplx v = bogoliubov_eval(src->impl, space->impl, field_from(space, theta_re, theta_im));
    *re = v.real();
    *im = v.imag();
  });
}

bogo_status bogo_variational_derivatives(const bogo_table* src, const bogo_space* space,
                                         const double* theta0_re, const double* theta0_im,
                                         bogo_table** out) {
  return guarded([&] {
    if (!src || !space || !theta0_re || !out)
      fail(Errc::invalid_argument, "bogo_variational_derivatives: null argument");
    *out = new bogo_table{
        variational_derivatives(src->impl, space->impl, field_from(space, theta0_re, theta0_im))};
  });
}

bogo_status bogo_ruelle_check(const bogo_table* k, const bogo_space* space, double a, double eps, int* pass,
                              uint32_t* witness) {
  return guarded([&] {
    if (!k || !space || !pass) fail(Errc::invalid_argument, "bogo_ruelle_check: null argument");
    RuelleReport rep = ruelle_bound_check(k->impl, space->impl, a, eps);
    *pass = rep.pass ? 1 : 0;
    if (witness) *witness = rep.witness;
  });
}

bogo_status bogo_potential_matrix(const bogo_space* space, const double* phi, const unsigned char* inf_flags,
                                  double beta, bogo_potential** out) {
  return guarded([&] {
    if (!space || !phi || !out) fail(Errc::invalid_argument, "bogo_potential_matrix: null argument");
    int n = space->impl.size();
    std::vector<std::vector<ExtReal>> m(n, std::vector<ExtReal>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (inf_flags && inf_flags[i * n + j])
          m[i][j] = ExtReal::infinite();
        else
          m[i][j] = {phi[i * n + j], false};
      }
    *out = new bogo_potential{PairPotential::from_matrix(std::move(m), beta)};
  });
}

bogo_status bogo_potential_radial(const bogo_space* space, const char* v_json, double beta,
                                  bogo_potential** out) {
  return guarded([&] {
    if (!space || !v_json || !out) fail(Errc::invalid_argument, "bogo_potential_radial: null argument");
    *out = new bogo_potential{
        PairPotential::from_radial(RadialPotential::from_json(v_json), space->impl, beta)};
  });
}

void bogo_potential_free(bogo_potential* p) { delete p; }

bogo_status bogo_energy(const bogo_potential* p, uint32_t eta, double* value, int* is_inf) {
  return guarded([&] {
    if (!p || !value || !is_inf) fail(Errc::invalid_argument, "bogo_energy: null argument");
    ExtReal e = energy(eta, p->impl);
    *value = e.inf ? 0.0 : e.value;
    *is_inf = e.inf ? 1 : 0;
  });
}

bogo_status bogo_interaction(const bogo_potential* p, uint32_t eta, uint32_t gamma, double* value,
                             int* is_inf) {
  return guarded([&] {
    if (!p || !value || !is_inf) fail(Errc::invalid_argument, "bogo_interaction: null argument");
    ExtReal w = interaction(eta, gamma, p->impl);
    *value = w.inf ? 0.0 : w.value;
    *is_inf = w.inf ? 1 : 0;
  });
}

bogo_status bogo_mayer_norm(const bogo_potential* p, const bogo_space* space, double* out) {
  return guarded([&] {
    if (!p || !space || !out) fail(Errc::invalid_argument, "bogo_mayer_norm: null argument");
    *out = mayer_norm(p->impl, space->impl);
  });
}

bogo_status bogo_gibbs_measure(const bogo_space* space, const bogo_potential* pot, bogo_table** out) {
  return guarded([&] {
    if (!space || !pot || !out) fail(Errc::invalid_argument, "bogo_gibbs_measure: null argument");
    *out = new bogo_table{gibbs_measure(space->impl, pot->impl)};
  });
}

bogo_status bogo_gnz_residual(const bogo_table* mu, const bogo_space* space, const bogo_potential* pot,
                              bogo_gnz_h_fn h, void* user, double* out) {
  return guarded([&] {
    if (!mu || !space || !pot || !h || !out) fail(Errc::invalid_argument, "bogo_gnz_residual: null");
    *out = gnz_residual(mu->impl, space->impl, pot->impl,
                        [&](int x, Mask g) { return cplx(h(x, g, user), 0.0); });
  });
}

bogo_status bogo_bogoliubov_equation_residual(const bogo_table* src, const bogo_space* space,
                                              const bogo_potential* pot, const double* theta_re,
                                              const double* theta_im, const double* f_re,
                                              const double* f_im, int form, double* out) {
  return guarded([&] {
    if (!src || !space || !pot || !theta_re || !out)
      fail(Errc::invalid_argument, "bogo_bogoliubov_equation_residual: null argument");
    BogoForm bf = form == BOGO_FORM_I ? BogoForm::i : (form == BOGO_FORM_II ? BogoForm::ii : BogoForm::iii);
    Field theta = field_from(space, theta_re, theta_im);
    if (bf == BogoForm::i) {
      *out = bogoliubov_equation_residual(src->impl, space->impl, pot->impl, theta, bf);
    } else {
      if (!f_re) fail(Errc::invalid_argument, "forms ii and iii need the increment field f");
      Field f = field_from(space, f_re, f_im);
      *out = bogoliubov_equation_residual(src->impl, space->impl, pot->impl, theta, bf, &f);
    }
  });
}

bogo_status bogo_fixed_point_solve(const bogo_space* space, const bogo_potential* pot, double tol,
                                   int max_iter, double alpha, int jobs, bogo_table** out,
                                   char** report_json) {
  return guarded([&] {
    if (!space || !pot || !out) fail(Errc::invalid_argument, "bogo_fixed_point_solve: null argument");
    auto [L, rep] = fixed_point_solve(space->impl, pot->impl, tol, max_iter, nullptr, alpha,
                                      jobs > 0 ? jobs : 1);
    *out = new bogo_table{std::move(L)};
    if (report_json) {
      nlohmann::json j = {{"alpha", rep.alpha},           {"c_beta", rep.c_beta},
                          {"rate_bound", rep.rate_bound}, {"iterations", rep.iterations},
                          {"final_delta", rep.final_delta}, {"converged", rep.converged},
                          {"wall_time_s", rep.wall_time_s}};
      *report_json = dup_string(j.dump());
    }
  });
}

bogo_status bogo_contraction_certificate(const bogo_space* space, const bogo_potential* pot, double alpha,
                                         int n_pairs, uint64_t seed, char** report_json) {
  return guarded([&] {
    if (!space || !pot || !report_json)
      fail(Errc::invalid_argument, "bogo_contraction_certificate: null argument");
    ContractionReport rep = contraction_certificate(space->impl, pot->impl, alpha, n_pairs, seed);
    nlohmann::json j = {{"alpha", rep.alpha},
                        {"c_beta", rep.c_beta},
                        {"rate_bound", rep.rate_bound},
                        {"empirical_ratio_max", rep.empirical_ratio_max},
                        {"empirical_ok", rep.empirical_ok}};
    *report_json = dup_string(j.dump());
  });
}

bogo_status bogo_run_config(const char* config_json, const char* out_dir, int64_t seed, int jobs,
                            double tolerance_scale, int* exit_code) {
  return guarded([&] {
    if (!config_json || !exit_code) fail(Errc::invalid_argument, "bogo_run_config: null argument");
    RunOptions opt;
    if (out_dir) opt.out_dir = out_dir;
    if (seed >= 0) opt.seed = static_cast<std::uint64_t>(seed);
    opt.jobs = jobs;
    opt.tolerance_scale = tolerance_scale > 0 ? tolerance_scale : 1.0;
    *exit_code = run_config_json(config_json, opt);
  });
}

bogo_status bogo_run_config_file(const char* path, const char* out_dir, int64_t seed, int jobs,
                                 double tolerance_scale, int* exit_code) {
  return guarded([&] {
    if (!path || !exit_code) fail(Errc::invalid_argument, "bogo_run_config_file: null argument");
    RunOptions opt;
    if (out_dir) opt.out_dir = out_dir;
    if (seed >= 0) opt.seed = static_cast<std::uint64_t>(seed);
    opt.jobs = jobs;
    opt.tolerance_scale = tolerance_scale > 0 ? tolerance_scale : 1.0;
    *exit_code = run_config_file(path, opt);
  });
}

bogo_status bogo_emit_plotdata(const char* run_dir, const char* kind) {
  return guarded([&] {
    if (!run_dir || !kind) fail(Errc::invalid_argument, "bogo_emit_plotdata: null argument");
    emit_plotdata(run_dir, kind);
  });
}

}  // extern "C"
