#include "bipoisson/workbench/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <set>

#include "bipoisson/invariant_functions.hpp"
#include "bipoisson/reduction.hpp"
#include "bipoisson/seeding.hpp"

namespace bipoisson::workbench {

namespace {

using Info = std::vector<std::pair<std::string, double>>;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::vector<std::string> kStageOrder = {"lie_core",   "orbit",         "isotropy",   "setup",
                                              "forms",      "pencil",        "degeneracy", "complement",
                                              "adapted_chart", "restricted", "brackets",   "freeness",
                                              "transversality", "slice"};

class Recorder {
 public:
  explicit Recorder(const WorkbenchConfig& config) : config_(config) {
    for (const auto& c : check_registry()) {
      if (config.all_checks() ||
          std::find(config.checks.begin(), config.checks.end(), c.name) != config.checks.end()) {
        enabled_.insert(c.name);
      }
    }
  }

  bool enabled(const std::string& name) const { return enabled_.count(name) > 0; }
  bool stage_enabled(const std::string& stage) const {
    for (const auto& c : check_registry()) {
      if (c.stage == stage && enabled(c.name)) return true;
    }
    return false;
  }

  double tolerance(const std::string& name) const {
    const auto it = config_.tolerances.find(name);
    return it != config_.tolerances.end() ? it->second : find_check(name)->tolerance;
  }

  void record(const std::string& name, double residual, Info info = {}, std::string note = {}) {
    if (!enabled(name)) return;
    const CheckInfo& c = *find_check(name);
    CheckRow row;
    row.name = c.name;
    row.anchor = c.anchor;
    row.stage = c.stage;
    row.residual = residual;
    row.tolerance = tolerance(name);
    row.comparison = c.comparison;
    const bool holds = satisfies(residual, row.tolerance, c.comparison);
    if (c.kind == CheckKind::positive) {
      row.status = holds ? "pass" : "fail";
    } else {
      row.status = holds ? "unexpected-pass" : "expected-fail";
    }
    row.info = std::move(info);
    row.note = std::move(note);
    rows_[name] = std::move(row);
  }

  void skip(const std::string& name, std::string note) {
    if (!enabled(name)) return;
    record(name, kNaN, {}, std::move(note));
    rows_[name].status = "skipped";
  }

  void finish(ReductionReport& report, const std::optional<StageError>& error) const {
    const auto failed_at = [&]() -> std::ptrdiff_t {
      if (!error) return -1;
      return std::find(kStageOrder.begin(), kStageOrder.end(), error->stage) - kStageOrder.begin();
    }();
    for (const auto& c : check_registry()) {
      if (!enabled(c.name)) continue;
      CheckRow row;
      if (const auto it = rows_.find(c.name); it != rows_.end()) {
        row = it->second;
      } else {
        row.name = c.name;
        row.anchor = c.anchor;
        row.stage = c.stage;
        row.residual = kNaN;
        row.tolerance = tolerance(c.name);
        row.comparison = c.comparison;
        const auto at = std::find(kStageOrder.begin(), kStageOrder.end(), c.stage) - kStageOrder.begin();
        row.status = (error && at == failed_at) ? "error" : "not-run";
      }
      (c.kind == CheckKind::positive ? report.checks : report.negative_controls).push_back(std::move(row));
    }
  }

 private:
  const WorkbenchConfig& config_;
  std::set<std::string> enabled_;
  std::map<std::string, CheckRow> rows_;
};

double max_of(const std::vector<double>& v) { return ordered_max(v, 0.0); }
double min_of(const std::vector<double>& v) { return ordered_min(v, kInf); }

template <typename T, typename F>
std::vector<double> column(const std::vector<T>& rows, F field) {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(field(r));
  return out;
}

Element unit(const Element& e) { return e / e.norm(); }

// W1 plus c_0 (e_1 e_2^T - e_2 e_1^T): not closed, since its exterior
// derivative has the component dc_0 ^ dc_1 ^ dc_2
FormField corrupted_form(FormField w1) {
  return [w1 = std::move(w1)](const Vector& c) -> Matrix {
    Matrix w = w1(c);
    w(1, 2) += c(0);
    w(2, 1) -= c(0);
    return w;
  };
}

struct Pipeline {
  const WorkbenchConfig& cfg;
  const PipelineOptions& opt;
  Recorder rec;
  ReductionReport report;
  std::optional<StageError> error;

  AlgebraPtr alg;
  OrbitConfig orbit;
  std::shared_ptr<const Chart> ambient_chart;
  std::vector<Vector> ambient_coords;
  std::optional<PrincipalIsotropy> iso;
  std::optional<ReductionSetup> setup;
  std::optional<RestrictedPencilData> restricted;
  std::vector<Vector> sub_coords;

  Pipeline(const WorkbenchConfig& c, const PipelineOptions& o) : cfg(c), opt(o), rec(c) {}

  Stream stream(std::string_view stage, std::uint64_t index = 0) const { return Stream(cfg.seed, stage, index); }
  double box() const { return Chart::kValidityBox; }

  template <typename F>
  void stage(const std::string& name, bool needed, F&& body) {
    if (error || !needed) return;
    const auto start = std::chrono::steady_clock::now();
    try {
      body();
    } catch (const std::exception& e) {
      error = StageError{name, e.what()};
    }
    if (opt.timing) {
      const std::chrono::duration<double, std::milli> ms = std::chrono::steady_clock::now() - start;
      report.timing_ms.emplace_back(name, ms.count());
    }
  }

  // regular points (a, w) with w a unit vector in m_hat
  TangentBundlePoint regular_point(int i) const {
    Stream rng = stream("regular-point", static_cast<std::uint64_t>(i));
    return {orbit.a, unit(setup->m_hat.basis() * rng.normal_vector(setup->m_hat.dim()))};
  }

  const RestrictedPencilData& restricted_data() {
    if (!restricted) {
      Stream rng = stream("restricted-base");
      const Element y0 = unit(setup->slice.basis() * rng.normal_vector(setup->slice.dim()));
      restricted = restricted_pencil(*setup, {orbit.a, y0}, cfg.fd_step);
      sub_coords.clear();
      for (int i = 0; i < cfg.points; ++i) {
        sub_coords.push_back(stream("sub-coords", i).uniform_vector(restricted->sub_chart->dim(), -box(), box()));
      }
    }
    return *restricted;
  }

  void lie_core() {
    const StructureAudit a = alg->audit();
    const double worst = std::max({a.closure, a.antisymmetry, a.jacobi, a.invariance, a.orthonormality,
                                   a.anti_hermitian});
    rec.record("structure_identities", worst,
               {{"closure", a.closure},
                {"antisymmetry", a.antisymmetry},
                {"jacobi", a.jacobi},
                {"invariance", a.invariance},
                {"orthonormality", a.orthonormality},
                {"anti_hermitian", a.anti_hermitian},
                {"min_product_eigenvalue", a.min_product_eigenvalue}});
  }

  void orbit_stage() {
    orbit = make_orbit_config(alg, build_seed_element(cfg, *alg));
    const OrbitConfigAudit a = audit(orbit);
    double worst = std::max({a.k_commutes, a.m_orthogonal, a.image_distance});
    std::string note;
    if (a.total_rank != alg->dim()) {
      worst = std::max(worst, 1.0);
      note = "k + m has rank " + std::to_string(a.total_rank);
    }
    rec.record("orbit_decomposition", worst,
               {{"k_commutes", a.k_commutes},
                {"m_orthogonal", a.m_orthogonal},
                {"image_distance", a.image_distance},
                {"total_rank", a.total_rank}},
               note);

    Stream rng = stream("ambient-base");
    const Element vbar = unit(orbit.m.basis() * rng.normal_vector(orbit.m.dim()));
    ambient_chart = std::make_shared<const Chart>(orbit, TangentBundlePoint{orbit.a, vbar}, orbit.m);
    for (int i = 0; i < cfg.points; ++i) {
      ambient_coords.push_back(stream("ambient-coords", i).uniform_vector(ambient_chart->dim(), -box(), box()));
    }
    if (rec.enabled("chart_injectivity")) {
      rec.record("chart_injectivity",
                 injectivity_spot_check(*ambient_chart, 100, derive_seed(cfg.seed, "chart-injectivity")),
                 {{"pairs", 100}});
    }
  }

  void isotropy_stage() {
    try {
      iso = principal_isotropy(orbit, cfg.samples, cfg.seed);
    } catch (const GenericityError& e) {
      rec.record("principal_isotropy_stable", 1.0, {}, e.what());
      throw;
    }
    rec.record("principal_isotropy_stable", 0.0,
               {{"dim_h", iso->h.dim()}, {"samples", cfg.samples}, {"rerun_samples", 2 * cfg.samples}});
  }

  void setup_stage() {
    setup = reduction_setup(orbit, iso->x0);
    const SetupIdentities& id = setup->identities;
    const double rank_gap = alg->dim() - id.p_sum_rank;
    rec.record("setup_identities", std::max({id.h_in_k, id.x0_centralizes_h, id.a_in_g_hat, id.p_orthogonal, rank_gap}),
               {{"h_in_k", id.h_in_k},
                {"x0_centralizes_h", id.x0_centralizes_h},
                {"a_in_g_hat", id.a_in_g_hat},
                {"p_orthogonal", id.p_orthogonal},
                {"p_sum_rank", id.p_sum_rank}});
    rec.record("slice_centralizes_h", id.slice_centralizes_h);
    rec.record("slice_is_complement", std::max(id.slice_in_m_hat, id.slice_complement_distance),
               {{"slice_in_m_hat", id.slice_in_m_hat}, {"complement_distance", id.slice_complement_distance}});

    const ReductionSetup& s = *setup;
    report.dims = {{"g", alg->dim()},       {"k", orbit.k.dim()},         {"m", orbit.m.dim()},
                   {"h", s.h.dim()},        {"n_h", s.n_h.dim()},         {"p", s.p.dim()},
                   {"g_hat", s.g_hat.dim()}, {"k_hat", s.k_hat.dim()},    {"m_hat", s.m_hat.dim()},
                   {"slice", s.slice.dim()}, {"z_hat", s.z_hat.dim()}};
    report.reduction = s.trivial() ? "trivial" : "nontrivial";
  }

  void forms_stage() {
    const auto w1 = canonical_form_field(ambient_chart, cfg.fd_step);
    const auto w2 = omega2_field(ambient_chart, cfg.fd_step);
    const std::vector<std::string> words = {"xx", "vv", "xv", "xxvv", "xvxv", "vvvv"};
    struct Row {
      double invariance = 0, c1 = 0, c2 = 0, s1 = 0, s2 = 0;
    };
    const bool want_inv = rec.enabled("invariant_functions");
    const bool want_closed = rec.enabled("w1_closed") || rec.enabled("w2_closed");
    const auto rows = sample_map<Row>(opt.exec, cfg.points, [&](int i) {
      const Vector& c = ambient_coords[i];
      Row r;
      if (want_inv) {
        const TangentBundlePoint p = ambient_chart->map(c);
        for (std::size_t w = 0; w < words.size(); ++w) {
          const auto f = invariant_function(alg, parse_word(words[w]));
          r.invariance = std::max(r.invariance, invariance_defect(*alg, f, p, 20,
                                                                  derive_seed(cfg.seed, "invariance",
                                                                              i * words.size() + w)));
        }
      }
      if (want_closed) {
        r.c1 = closedness_residual(w1, c, cfg.fd_step);
        r.c2 = closedness_residual(w2, c, cfg.fd_step);
      }
      r.s1 = min_singular_value(w1(c));
      r.s2 = min_singular_value(w2(c));
      return r;
    });
    rec.record("invariant_functions", max_of(column(rows, [](const Row& r) { return r.invariance; })),
               {{"points", cfg.points}, {"words", static_cast<double>(words.size())}, {"conjugations", 20}});
    rec.record("w1_closed", max_of(column(rows, [](const Row& r) { return r.c1; })), {{"points", cfg.points}});
    rec.record("w2_closed", max_of(column(rows, [](const Row& r) { return r.c2; })), {{"points", cfg.points}});
    const double s1 = min_of(column(rows, [](const Row& r) { return r.s1; }));
    const double s2 = min_of(column(rows, [](const Row& r) { return r.s2; }));
    rec.record("forms_nondegenerate", std::min(s1, s2), {{"sigma_min_w1", s1}, {"sigma_min_w2", s2}});
  }

  void pencil_stage() {
    const int d = ambient_chart->dim();
    const auto w1 = canonical_form_field(ambient_chart, cfg.fd_step);
    const auto p1 = invert_form(w1, d, "eta1");
    const auto p2 = invert_form(omega2_field(ambient_chart, cfg.fd_step), d, "eta2");
    const auto pc = invert_form(corrupted_form(w1), d, "corrupted eta1");
    struct Row {
      double j1 = 0, j2 = 0, compat = 0, homogeneity = 0, corrupted = 0;
    };
    const bool want_pc = rec.enabled("jacobi_quadratic_homogeneity") || rec.enabled("corrupted_form_jacobi");
    const auto rows = sample_map<Row>(opt.exec, cfg.points, [&](int i) {
      const Vector& c = ambient_coords[i];
      Row r;
      if (rec.enabled("eta1_jacobi")) r.j1 = jacobi_residual(p1, c, cfg.fd_step);
      if (rec.enabled("eta2_jacobi")) r.j2 = jacobi_residual(p2, c, cfg.fd_step);
      if (rec.enabled("pencil_compatibility")) r.compat = compatibility_residual(p1, p2, c, cfg.fd_step);
      if (want_pc) {
        const Vector j = jacobi_tensor(pc, c, cfg.fd_step);
        r.corrupted = j.cwiseAbs().maxCoeff();
        for (const double lambda : {2.0, 10.0}) {
          const PoissonField scaled([pc, lambda](const Vector& x) -> Matrix { return lambda * pc(x); }, d, "scaled");
          const Vector js = jacobi_tensor(scaled, c, cfg.fd_step);
          r.homogeneity = std::max(r.homogeneity, (js - lambda * lambda * j).cwiseAbs().maxCoeff() /
                                                      (lambda * lambda * r.corrupted));
        }
      }
      return r;
    });
    rec.record("eta1_jacobi", max_of(column(rows, [](const Row& r) { return r.j1; })), {{"points", cfg.points}});
    rec.record("eta2_jacobi", max_of(column(rows, [](const Row& r) { return r.j2; })), {{"points", cfg.points}});
    rec.record("pencil_compatibility", max_of(column(rows, [](const Row& r) { return r.compat; })),
               {{"points", cfg.points}});
    const auto corrupted = column(rows, [](const Row& r) { return r.corrupted; });
    rec.record("jacobi_quadratic_homogeneity", max_of(column(rows, [](const Row& r) { return r.homogeneity; })),
               {{"min_corrupted_jacobi", min_of(corrupted)}});
    rec.record("corrupted_form_jacobi", max_of(corrupted), {{"min_over_points", min_of(corrupted)}});
  }

  void degeneracy_stage() {
    const int d = ambient_chart->dim();
    const auto p1 = invert_form(canonical_form_field(ambient_chart, cfg.fd_step), d, "eta1");
    const auto p2 = invert_form(omega2_field(ambient_chart, cfg.fd_step), d, "eta2");
    const auto circle = unit_circle_samples(16);
    const auto verdicts = sample_map<DegeneracyVerdict>(opt.exec, cfg.points, [&](int i) {
      return classify_profile(degeneracy_profile(p1, p2, ambient_coords[i], circle));
    });
    record_degeneracy(verdicts, "degenerate_on_line", "nondegenerate_off_line");
  }

  void record_degeneracy(const std::vector<DegeneracyVerdict>& v, const std::string& on, const std::string& off) {
    const auto on_counts = column(v, [](const DegeneracyVerdict& r) { return double(r.on_line); });
    const auto off_counts = column(v, [](const DegeneracyVerdict& r) { return double(r.off_line); });
    rec.record(on, max_of(column(v, [](const DegeneracyVerdict& r) { return r.max_sigma_on_line; })),
               {{"points", static_cast<double>(v.size())}, {"on_line_samples_per_point", min_of(on_counts)}});
    rec.record(off, min_of(column(v, [](const DegeneracyVerdict& r) { return r.min_sigma_off_line; })),
               {{"points", static_cast<double>(v.size())}, {"off_line_samples_per_point", min_of(off_counts)}});
  }

  void complement_stage() {
    const ReductionSetup& s = *setup;
    struct Row {
      double iso = 0, tangent = 0, independence = 0, pairing = 0, sigma = kInf, product = 0, moved = 0;
    };
    const auto rows = sample_map<Row>(opt.exec, cfg.points, [&](int i) {
      const TangentBundlePoint point = regular_point(i);
      Row r;
      r.iso = projector_distance(isotropy_algebra(orbit, point), s.h);
      if (r.iso > kSubspaceTolerance) return r;  // reported; the rest needs regularity

      const Subspace tangent = regular_tangent_space(s, point);
      const Chart sub(orbit, point, s.m_hat);
      r.tangent = projector_distance(tangent, Subspace::span(sub.pushforward(Vector::Zero(sub.dim()))));
      const Subspace complement = canonical_complement(s, point);
      r.independence = complement_independence(complement, tangent);

      const Chart chart(orbit, point, orbit.m);
      const Vector zero = Vector::Zero(chart.dim());
      const Matrix w1 = canonical_form_matrix(chart, zero, cfg.fd_step);
      const Matrix w2 = w1 + pullback_kks_matrix(chart, zero);
      std::vector<Matrix> forms = {w1, w2};
      Stream rng = stream("pencil-member", static_cast<std::uint64_t>(i));
      while (forms.size() < 5) {
        const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const double t1 = std::cos(angle), t2 = std::sin(angle);
        if (std::abs(t1 + t2) < 0.1) continue;
        forms.push_back(t1 * w1 + t2 * w2);
      }
      for (const Matrix& f : forms) {
        const OrthogonalityResult o = complement_orthogonality(s, chart, zero, f);
        r.pairing = std::max(r.pairing, o.pairing);
        r.sigma = std::min({r.sigma, o.sigma_complement, o.sigma_tangent});
      }

      for (int j = 0; j < 3; ++j) {
        const auto product = random_invariant_product(*alg, s.h, derive_seed(cfg.seed, "complement-product", 3 * i + j));
        const Subspace p_other = orthogonal_complement(*alg, s.n_h, product);
        r.moved = std::max(r.moved, projector_distance(p_other, s.p));
        r.product = std::max(r.product, projector_distance(canonical_complement(s, p_other, point), complement));
      }
      return r;
    });
    const std::string vacuous = s.p.dim() == 0 ? "p = 0: the canonical complement is zero" : "";
    rec.record("regular_points_isotropy", max_of(column(rows, [](const Row& r) { return r.iso; })),
               {{"points", cfg.points}});
    const double worst_iso = max_of(column(rows, [](const Row& r) { return r.iso; }));
    if (!(worst_iso <= kSubspaceTolerance)) {
      throw DomainError("complement: a sampled point (a, w) is not regular");
    }
    rec.record("regular_tangent_matches_subchart", max_of(column(rows, [](const Row& r) { return r.tangent; })),
               {{"dim", 2.0 * s.m_hat.dim()}});
    rec.record("complement_independent", min_of(column(rows, [](const Row& r) { return r.independence; })),
               {{"dim_complement", s.p.dim()}});
    rec.record("complement_orthogonality", max_of(column(rows, [](const Row& r) { return r.pairing; })),
               {{"points", cfg.points}, {"forms_per_point", 5}}, vacuous);
    rec.record("complement_blocks_nondegenerate", min_of(column(rows, [](const Row& r) { return r.sigma; })), {},
               vacuous);
    rec.record("complement_product_independence", max_of(column(rows, [](const Row& r) { return r.product; })),
               {{"products_per_point", 3}, {"max_p_distance", max_of(column(rows, [](const Row& r) { return r.moved; }))}},
               vacuous);
    if (rec.enabled("normalizer_complement_sum")) {
      const auto cmp = compare_normalizer_complements(*alg, s.h, derive_seed(cfg.seed, "normalizer-complement"), 20);
      rec.record("normalizer_complement_sum", cmp.max_sum_distance,
                 {{"trials", cmp.trials}, {"max_p_distance", cmp.max_complement_distance}});
    }
  }

  void adapted_stage() {
    const ReductionSetup& s = *setup;
    const int dp = s.p.dim();
    struct Row {
      double blocks = 0, split = 0, sigma = kInf, off = 0;
    };
    const auto rows = sample_map<Row>(opt.exec, cfg.points, [&](int i) {
      const AdaptedChart chart(s, regular_point(i));
      Stream rng = stream("adapted-coords", static_cast<std::uint64_t>(i));
      Vector coords = Vector::Zero(chart.dim());
      coords.tail(chart.dim() - dp) = rng.uniform_vector(chart.dim() - dp, -box(), box());
      Row r;
      for (const Matrix& f : {canonical_form_matrix(chart, coords, cfg.fd_step), omega2_matrix(chart, coords, cfg.fd_step)}) {
        const BlockSplit b = split_blocks(f, dp);
        r.blocks = std::max(r.blocks, b.off_diagonal);
        r.sigma = std::min({r.sigma, b.sigma_complement, b.sigma_tangent});
      }
      const FrameSplit fs = adapted_frame_split(s, chart, coords);
      r.split = std::max(fs.complement_distance, fs.tangent_distance);
      if (dp > 0 && rec.enabled("adapted_blocks_off_submanifold")) {
        coords.head(dp) = 0.05 * unit(rng.normal_vector(dp));
        for (const Matrix& f : {canonical_form_matrix(chart, coords, cfg.fd_step), omega2_matrix(chart, coords, cfg.fd_step)}) {
          r.off = std::max(r.off, split_blocks(f, dp).off_diagonal);
        }
      }
      return r;
    });
    const std::string vacuous = dp == 0 ? "p = 0: the adapted chart is the sub-chart" : "";
    rec.record("adapted_blocks", max_of(column(rows, [](const Row& r) { return r.blocks; })), {{"points", cfg.points}},
               vacuous);
    rec.record("adapted_frame_split", max_of(column(rows, [](const Row& r) { return r.split; })));
    rec.record("adapted_diagonal_nondegenerate", min_of(column(rows, [](const Row& r) { return r.sigma; })));
    if (dp == 0) {
      rec.skip("adapted_blocks_off_submanifold", "p = 0: there are no off-diagonal blocks");
    } else {
      const auto off = column(rows, [](const Row& r) { return r.off; });
      rec.record("adapted_blocks_off_submanifold", max_of(off), {{"complement_norm", 0.05}, {"min_over_points", min_of(off)}});
    }
  }

  void restricted_stage() {
    const RestrictedPencilData& d = restricted_data();
    struct Row {
      double closed = 0, sigma = 0, jacobi = 0, compat = 0;
      DegeneracyVerdict deg;
    };
    const auto circle = unit_circle_samples(16);
    const auto rows = sample_map<Row>(opt.exec, cfg.points, [&](int i) {
      const Vector& c = sub_coords[i];
      Row r;
      r.closed = std::max(closedness_residual(d.w1_sub, c, cfg.fd_step), closedness_residual(d.w2_sub, c, cfg.fd_step));
      r.sigma = std::min(min_singular_value(d.w1_sub(c)), min_singular_value(d.w2_sub(c)));
      if (rec.enabled("restricted_jacobi")) {
        r.jacobi = std::max(jacobi_residual(d.p1_sub, c, cfg.fd_step), jacobi_residual(d.p2_sub, c, cfg.fd_step));
      }
      if (rec.enabled("restricted_compatibility")) r.compat = compatibility_residual(d.p1_sub, d.p2_sub, c, cfg.fd_step);
      r.deg = classify_profile(degeneracy_profile(d.p1_sub, d.p2_sub, c, circle));
      return r;
    });
    const Info where = {{"points", cfg.points}, {"sub_dim", static_cast<double>(d.sub_chart->dim())}};
    rec.record("restricted_closed", max_of(column(rows, [](const Row& r) { return r.closed; })), where);
    rec.record("restricted_nondegenerate", min_of(column(rows, [](const Row& r) { return r.sigma; })));
    rec.record("restricted_jacobi", max_of(column(rows, [](const Row& r) { return r.jacobi; })), where);
    rec.record("restricted_compatibility", max_of(column(rows, [](const Row& r) { return r.compat; })), where);
    std::vector<DegeneracyVerdict> verdicts;
    for (const auto& r : rows) verdicts.push_back(r.deg);
    record_degeneracy(verdicts, "restricted_degenerate_on_line",
                      "restricted_nondegenerate_off_line");
  }

  void brackets_stage() {
    const RestrictedPencilData& d = restricted_data();
    const std::vector<std::string> words = {"vv", "xxvv", "xvxv", "vvvv"};
    std::vector<InvariantFunction> fs;
    for (const auto& w : words) fs.push_back(invariant_function(alg, parse_word(w)));
    std::vector<PencilParameter> ts;
    for (const auto& [t1, t2] : cfg.t_samples) {
      if (std::abs(t1 + t2) > 1e-12) ts.emplace_back(t1, t2);
    }
    struct Row {
      double bracket = 0, bracket_size = 0, covector = 0, covector_size = 0;
      int comparisons = 0;
    };
    const int sub_dim = d.sub_chart->dim();
    const auto rows = sample_map<Row>(opt.exec, cfg.points, [&](int i) {
      const Vector& c = sub_coords[i];
      Row r;
      Stream rng = stream("covectors", static_cast<std::uint64_t>(i));
      std::vector<std::pair<Vector, Vector>> covectors;
      for (int k = 0; k < 3; ++k) covectors.emplace_back(rng.normal_vector(sub_dim), rng.normal_vector(sub_dim));
      for (const auto& t : ts) {
        if (rec.enabled("bracket_agreement")) {
          for (std::size_t a = 0; a < fs.size(); ++a)
            for (std::size_t b = a + 1; b < fs.size(); ++b) {
              const BracketComparison cmp = bracket_agreement(*setup, d, fs[a], fs[b], c, t, cfg.fd_step);
              r.bracket = std::max(r.bracket, cmp.residual);
              r.bracket_size = std::max(r.bracket_size, std::abs(cmp.ambient));
              ++r.comparisons;
            }
        }
        if (rec.enabled("covector_agreement")) {
          for (const auto& [alpha, beta] : covectors) {
            const BracketComparison cmp = covector_agreement(*setup, d, alpha, beta, c, t);
            r.covector = std::max(r.covector, cmp.residual);
            r.covector_size = std::max(r.covector_size, std::abs(cmp.ambient));
          }
        }
      }
      return r;
    });
    const double pairs = static_cast<double>(fs.size() * (fs.size() - 1) / 2);
    rec.record("bracket_agreement", max_of(column(rows, [](const Row& r) { return r.bracket; })),
               {{"points", cfg.points},
                {"function_pairs", pairs},
                {"pencil_parameters", static_cast<double>(ts.size())},
                {"max_abs_bracket", max_of(column(rows, [](const Row& r) { return r.bracket_size; }))}});
    rec.record("covector_agreement", max_of(column(rows, [](const Row& r) { return r.covector; })),
               {{"points", cfg.points},
                {"covector_pairs", 3},
                {"pencil_parameters", static_cast<double>(ts.size())},
                {"max_abs_value", max_of(column(rows, [](const Row& r) { return r.covector_size; }))}});
  }

  void freeness_stage() {
    const RestrictedPencilData& d = restricted_data();
    std::vector<TangentBundlePoint> points;
    for (const auto& c : sub_coords) points.push_back(d.sub_chart->map(c));
    rec.record("local_freeness", local_freeness_excess(*setup, points),
               {{"points", cfg.points}, {"dim_z_hat", setup->z_hat.dim()}});
    rec.record("zero_section_isotropy_excess", local_freeness_excess(*setup, {{orbit.a, Element::Zero(alg->dim())}}));
  }

  void transversality_stage() {
    const ReductionSetup& s = *setup;
    const auto deficits = sample_map<double>(opt.exec, cfg.points, [&](int i) {
      Stream rng = stream("transversality", static_cast<std::uint64_t>(i));
      const Element y = unit(s.slice.basis() * rng.normal_vector(s.slice.dim()));
      return static_cast<double>(transversality_deficiency(s, {orbit.a, y}));
    });
    rec.record("transversality", max_of(deficits), {{"points", cfg.points}});
    rec.record("zero_section_transversality", transversality_deficiency(s, {orbit.a, Element::Zero(alg->dim())}));
  }

  void slice_stage() {
    const ReductionSetup& s = *setup;
    const double tol = rec.tolerance("slice_normal_form");
    struct Row {
      double residual = 0, isometry = 0;
      int iterations = 0;
      bool converged = true;
    };
    const auto rows = sample_map<Row>(opt.exec, cfg.slice_inputs, [&](int j) {
      Stream rng = stream("slice-input", static_cast<std::uint64_t>(j));
      const Element y = unit(orbit.m.basis() * rng.normal_vector(orbit.m.dim()));
      Row r;
      try {
        const SliceNormalForm nf = slice_normal_form(s, y, cfg.slice_max_iter, tol);
        r.residual = nf.residual;
        r.iterations = nf.iterations;
        r.isometry = std::abs(nf.y.squaredNorm() - y.squaredNorm());
      } catch (const ConvergenceError& e) {
        r.residual = e.best_residual();
        r.iterations = cfg.slice_max_iter;
        r.converged = false;
      }
      return r;
    });
    const auto failures = column(rows, [](const Row& r) { return r.converged ? 0.0 : 1.0; });
    double failed = 0;
    for (double f : failures) failed += f;
    rec.record("slice_normal_form", max_of(column(rows, [](const Row& r) { return r.residual; })),
               {{"inputs", cfg.slice_inputs},
                {"max_iter", cfg.slice_max_iter},
                {"max_iterations_used", max_of(column(rows, [](const Row& r) { return double(r.iterations); }))},
                {"not_converged", failed}},
               failed > 0 ? "some inputs exhausted the iteration budget" : "");
    rec.record("slice_normal_form_isometry", max_of(column(rows, [](const Row& r) { return r.isometry; })));
  }

  ReductionReport run() {
    report.config = config_to_json(cfg);
    const auto needs = [&](std::initializer_list<const char*> stages) {
      for (const char* st : stages) {
        if (rec.stage_enabled(st)) return true;
      }
      return false;
    };
    const bool forms_needed = needs({"forms"});

    stage("lie_core", true, [&] {
      alg = build_algebra(cfg);
      report.algebra = alg->name();
      report.algebra_dim = alg->dim();
      lie_core();
    });
    stage("orbit", true, [&] { orbit_stage(); });
    stage("isotropy", true, [&] { isotropy_stage(); });
    stage("setup", true, [&] { setup_stage(); });
    stage("forms", forms_needed, [&] { forms_stage(); });
    stage("pencil", needs({"pencil"}), [&] { pencil_stage(); });
    stage("degeneracy", needs({"degeneracy"}), [&] { degeneracy_stage(); });
    stage("complement", needs({"complement"}), [&] { complement_stage(); });
    stage("adapted_chart", needs({"adapted_chart"}), [&] { adapted_stage(); });
    stage("restricted", needs({"restricted"}), [&] { restricted_stage(); });
    stage("brackets", needs({"brackets"}), [&] { brackets_stage(); });
    stage("freeness", needs({"freeness"}), [&] { freeness_stage(); });
    stage("transversality", needs({"transversality"}), [&] { transversality_stage(); });
    stage("slice", needs({"slice"}), [&] { slice_stage(); });

    rec.finish(report, error);
    report.stage_error = error;
    report.pass = compute_verdict(report);
    return report;
  }
};

}  // namespace

ReductionReport run_pipeline(const WorkbenchConfig& config, const PipelineOptions& options) {
  Pipeline p(config, options);
  return p.run();
}

}  // namespace bipoisson::workbench
