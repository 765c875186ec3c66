#include "af/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "af/ellipticity.hpp"
#include "af/errors.hpp"
#include "af/frame_numerics.hpp"
#include "af/ifs.hpp"
#include "af/reverse_classify.hpp"
#include "af/transforms.hpp"
#include "af/two_translate.hpp"

namespace af {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& slug, const std::string& msg) {
    throw ArgumentError(slug, msg);
}

Rational json_rational(const json& v) {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(static_cast<long long>(v.get<std::int64_t>()));
    if (v.is_number_unsigned()) return Rational(static_cast<unsigned long long>(v.get<std::uint64_t>()));
    if (v.is_number_float()) {
        double d = v.get<double>();
        if (!std::isfinite(d)) bad("cli.bad-scalar", "non-finite number in config");
        return Rational(d);  // exact binary value
    }
    bad("cli.bad-scalar", "expected a number, \"num/den\" string, or sqrt tag: " + v.dump());
}

ExactScalar json_scalar(const json& v) {
    if (v.is_object()) {
        if (!v.contains("tag") || !v["tag"].is_string() || v["tag"] != "sqrt")
            bad("cli.bad-scalar", "the only tagged scalar form is {\"tag\":\"sqrt\",...}");
        if (!v.contains("of")) bad("cli.bad-scalar", "sqrt tag needs an \"of\" field");
        Rational of = json_rational(v.at("of"));
        if (of < 0) bad("cli.bad-scalar", "sqrt tag of a negative rational");
        ExactScalar s = ExactScalar::sqrt_of(of);
        if (v.contains("times")) s = ExactScalar(json_rational(v.at("times"))) * s;
        if (v.contains("plus")) s = ExactScalar(json_rational(v.at("plus"))) + s;
        return s;
    }
    return ExactScalar(json_rational(v));
}

ExactVec json_vec(const json& v) {
    if (!v.is_array() || v.empty()) bad("cli.bad-vector", "expected a nonempty array: " + v.dump());
    ExactVec out;
    out.reserve(v.size());
    for (const auto& e : v) out.push_back(json_scalar(e));
    return out;
}

RationalVec json_rvec(const json& v) {
    if (!v.is_array() || v.empty()) bad("cli.bad-vector", "expected a nonempty array: " + v.dump());
    RationalVec out;
    out.reserve(v.size());
    for (const auto& e : v) out.push_back(json_rational(e));
    return out;
}

std::vector<ExactVec> json_points(const json& v) {
    if (!v.is_array()) bad("cli.bad-points", "expected an array of vectors");
    std::vector<ExactVec> out;
    for (const auto& e : v) out.push_back(json_vec(e));
    return out;
}

std::vector<RationalVec> json_rpoints(const json& v) {
    if (!v.is_array()) bad("cli.bad-points", "expected an array of vectors");
    std::vector<RationalVec> out;
    for (const auto& e : v) out.push_back(json_rvec(e));
    return out;
}

RationalMatrix json_matrix(const json& v) {
    if (!v.is_array() || v.empty()) bad("cli.bad-matrix", "expected an array of rows");
    int rows = static_cast<int>(v.size());
    RationalVec first = json_rvec(v.at(0));
    int cols = static_cast<int>(first.size());
    RationalMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        RationalVec row = json_rvec(v.at(static_cast<size_t>(i)));
        if (static_cast<int>(row.size()) != cols)
            bad("cli.bad-matrix", "matrix rows have unequal lengths");
        for (int j = 0; j < cols; ++j) m(i, j) = row[static_cast<size_t>(j)];
    }
    return m;
}

Domain json_domain(const json& v) {
    if (!v.is_object()) bad("cli.bad-domain", "domain must be an object");
    if (!v.contains("corner") || !v.contains("edges"))
        bad("cli.bad-domain", "domain needs \"corner\" and \"edges\"");
    ExactVec corner = json_vec(v.at("corner"));
    ExactVec edges = json_vec(v.at("edges"));
    std::vector<ExactVec> translates;
    if (v.contains("translates"))
        translates = json_points(v.at("translates"));
    else
        translates.push_back(ExactVec(corner.size(), ExactScalar(0)));
    return Domain(std::move(corner), std::move(edges), std::move(translates));
}

AffineSystem json_system(const json& R, const json* B, const json* L) {
    AffineSystem sys;
    sys.R = json_matrix(R);
    if (B) sys.B = json_rpoints(*B);
    if (L) sys.L = json_rpoints(*L);
    return sys;
}

SpectrumSpec json_spectrum(const json& v) {
    if (!v.is_object() || !v.contains("kind") || !v["kind"].is_string())
        bad("cli.bad-spectrum", "spectrum needs a \"kind\" of finite, lattice, or ifs");
    std::string kind = v["kind"].get<std::string>();
    if (kind == "finite") {
        if (!v.contains("points")) bad("cli.bad-spectrum", "finite spectrum needs \"points\"");
        FiniteSet s;
        s.points = json_points(v.at("points"));
        return SpectrumSpec(std::move(s));
    }
    if (kind == "lattice") {
        if (!v.contains("generators")) bad("cli.bad-spectrum", "lattice spectrum needs \"generators\"");
        LatticeCosets s;
        s.generators = json_points(v.at("generators"));
        if (v.contains("offsets")) s.offsets = json_points(v.at("offsets"));
        return SpectrumSpec(std::move(s));
    }
    if (kind == "ifs") {
        if (!v.contains("R") || !v.contains("L"))
            bad("cli.bad-spectrum", "ifs spectrum needs \"R\" and \"L\"");
        IfsGenerated s;
        const json* B = v.contains("B") ? &v.at("B") : nullptr;
        s.system = json_system(v.at("R"), B, &v.at("L"));
        if (v.contains("depth")) s.depth = v.at("depth").get<int>();
        if (v.contains("seed")) s.seed = json_points(v.at("seed"));
        return SpectrumSpec(std::move(s));
    }
    bad("cli.bad-spectrum", "unknown spectrum kind \"" + kind + "\"");
}

double json_double(const json& v) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return to_double(parse_rational(v.get<std::string>()));
    bad("cli.bad-scalar", "expected a numeric value: " + v.dump());
}

void check_dims(JobConfig& cfg) {
    int d = cfg.dimension;
    auto see = [&](int n, const char* what) {
        if (n <= 0) bad("cli.bad-config", std::string(what) + " has no dimension");
        if (d == 0)
            d = n;
        else if (d != n)
            bad("cli.dim-mismatch", std::string(what) + " disagrees with the config dimension");
    };
    if (cfg.domain) see(cfg.domain->dim(), "domain");
    if (cfg.domain2) see(cfg.domain2->dim(), "domain2");
    if (cfg.spectrum) see(cfg.spectrum->dim(), "spectrum");
    if (cfg.spectrum2) see(cfg.spectrum2->dim(), "spectrum2");
    if (cfg.R) {
        if (cfg.R->rows() != cfg.R->cols()) bad("cli.bad-matrix", "R must be square");
        see(cfg.R->rows(), "R");
    }
    for (const auto& b : cfg.B) see(static_cast<int>(b.size()), "B");
    for (const auto& l : cfg.L) see(static_cast<int>(l.size()), "L");
    if (cfg.a) see(static_cast<int>(cfg.a->size()), "a");
    if (cfg.beta) see(static_cast<int>(cfg.beta->size()), "beta");
    if (cfg.t) see(static_cast<int>(cfg.t->size()), "t");
    for (const auto& p : cfg.lambda0) see(static_cast<int>(p.size()), "lambda0");
    cfg.dimension = d;
}

JobConfig parse_config_json(const json& doc) {
    if (!doc.is_object()) bad("cli.bad-config", "config top level must be a JSON object");
    static const std::set<std::string> known = {
        "dimension", "domain", "domain2", "spectrum", "spectrum2", "R",     "B",
        "L",         "a",      "beta",    "t",        "lambda0",   "k",     "K",
        "k2",        "K2",     "q",       "radius",   "depth",     "grid",  "seed",
        "threads",   "limit"};
    for (auto it = doc.begin(); it != doc.end(); ++it)
        if (!known.count(it.key())) bad("cli.unknown-field", "unknown config field \"" + it.key() + "\"");

    JobConfig cfg;
    if (doc.contains("dimension")) cfg.dimension = doc["dimension"].get<int>();
    if (doc.contains("domain")) cfg.domain = json_domain(doc["domain"]);
    if (doc.contains("domain2")) cfg.domain2 = json_domain(doc["domain2"]);
    if (doc.contains("spectrum")) cfg.spectrum = json_spectrum(doc["spectrum"]);
    if (doc.contains("spectrum2")) cfg.spectrum2 = json_spectrum(doc["spectrum2"]);
    if (doc.contains("R")) cfg.R = json_matrix(doc["R"]);
    if (doc.contains("B")) cfg.B = json_rpoints(doc["B"]);
    if (doc.contains("L")) cfg.L = json_rpoints(doc["L"]);
    if (doc.contains("a")) cfg.a = json_vec(doc["a"]);
    if (doc.contains("beta")) cfg.beta = json_vec(doc["beta"]);
    if (doc.contains("t")) cfg.t = json_vec(doc["t"]);
    if (doc.contains("lambda0")) cfg.lambda0 = json_points(doc["lambda0"]);
    if (doc.contains("k")) cfg.k = json_double(doc["k"]);
    if (doc.contains("K")) cfg.K = json_double(doc["K"]);
    if (doc.contains("k2")) cfg.k2 = json_double(doc["k2"]);
    if (doc.contains("K2")) cfg.K2 = json_double(doc["K2"]);
    if (doc.contains("q")) cfg.denominator_bound = doc["q"].get<int>();
    if (doc.contains("radius")) cfg.radius = json_scalar(doc["radius"]);
    if (doc.contains("depth")) cfg.depth = doc["depth"].get<int>();
    if (doc.contains("grid")) cfg.grid = doc["grid"].get<int>();
    if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("threads")) cfg.threads = doc["threads"].get<int>();
    if (doc.contains("limit")) cfg.limit = doc["limit"].get<bool>();
    check_dims(cfg);
    return cfg;
}

// --- emission helpers --------------------------------------------------------

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string vec_text(const ExactVec& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ';';
        s += v[i].to_string();
    }
    return s;
}

json vec_json(const ExactVec& v) {
    json a = json::array();
    for (const auto& c : v) a.push_back(c.to_string());
    return a;
}

json cert_json(const FrameCertificate& c) {
    json j;
    j["k"] = c.k;
    j["K"] = c.K;
    j["provenance"] =
        c.provenance == Provenance::ExactTheorem ? "exact-theorem" : "numerical-estimate";
    j["tolerance"] = c.tolerance;
    j["method"] = c.method;
    j["assumptions"] = c.assumptions;
    j["flagged_not_total"] = c.flagged_not_total;
    if (c.k_exact) j["k_exact"] = rational_to_string(*c.k_exact);
    if (c.K_exact) j["K_exact"] = rational_to_string(*c.K_exact);
    return j;
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) bad("cli.bad-out-dir", "cannot open " + path + " for writing");
    out << content;
    if (!out) bad("cli.bad-out-dir", "failed writing " + path);
}

// --- field guards --------------------------------------------------------------

const Domain& need_domain(const JobConfig& cfg, const char* which = "domain") {
    const std::optional<Domain>& d = std::string(which) == "domain2" ? cfg.domain2 : cfg.domain;
    if (!d) bad("cli.missing-field", std::string("this command needs \"") + which + "\"");
    return *d;
}

const SpectrumSpec& need_spectrum(const JobConfig& cfg, const char* which = "spectrum") {
    const std::optional<SpectrumSpec>& s =
        std::string(which) == "spectrum2" ? cfg.spectrum2 : cfg.spectrum;
    if (!s) bad("cli.missing-field", std::string("this command needs \"") + which + "\"");
    return *s;
}

const std::vector<RationalVec>& need_B(const JobConfig& cfg) {
    if (cfg.B.empty()) bad("cli.missing-field", "this command needs \"B\"");
    return cfg.B;
}

const std::vector<RationalVec>& need_L(const JobConfig& cfg) {
    if (cfg.L.empty()) bad("cli.missing-field", "this command needs \"L\"");
    return cfg.L;
}

AffineSystem need_system(const JobConfig& cfg, bool need_l) {
    if (!cfg.R) bad("cli.missing-field", "this command needs \"R\"");
    AffineSystem sys;
    sys.R = *cfg.R;
    sys.B = need_B(cfg);
    if (need_l)
        sys.L = need_L(cfg);
    else
        sys.L = cfg.L;
    return sys;
}

ExactVec origin(int dim) { return ExactVec(static_cast<size_t>(dim), ExactScalar(0)); }

std::optional<FrameCertificate> config_cert(const std::optional<double>& k,
                                            const std::optional<double>& K) {
    if (!k && !K) return std::nullopt;
    if (!k || !K) bad("cli.missing-field", "frame constants come in pairs (k with K, k2 with K2)");
    FrameCertificate c;
    c.k = *k;
    c.K = *K;
    c.method = "config";
    c.assumptions.push_back("constants supplied by configuration");
    return c;
}

// --- commands --------------------------------------------------------------------

json cmd_elliptic(const JobConfig& cfg, const std::string&) {
    EllipticityReport rep = build_report(need_B(cfg), need_L(cfg));
    json r;
    r["p"] = rep.p;
    r["P"] = rep.P;
    r["hadamard"] = rep.hadamard;
    r["translate_count"] = rep.B.size();
    r["frequency_count"] = rep.L.size();
    return r;
}

json cmd_extend(const JobConfig& cfg, const std::string&) {
    if (!cfg.k || !cfg.K) bad("cli.missing-field", "extend needs base constants \"k\" and \"K\"");
    EllipticityReport rep = build_report(need_B(cfg), need_L(cfg));
    const SpectrumSpec* spec = cfg.spectrum ? &*cfg.spectrum : nullptr;
    FrameCertificate cert = propagate_constants(*cfg.k, *cfg.K, rep, spec);
    json r;
    r["p"] = rep.p;
    r["P"] = rep.P;
    r["certificate"] = cert_json(cert);
    return r;
}

json cmd_two_translate(const JobConfig& cfg, const std::string& out_dir) {
    TwoTranslateProblem prob;
    prob.omega = need_domain(cfg);
    prob.lambda = need_spectrum(cfg);
    prob.omega2 = need_domain(cfg, "domain2");
    prob.lambda2 = need_spectrum(cfg, "spectrum2");
    if (!cfg.a) bad("cli.missing-field", "two-translate needs the translation vector \"a\"");
    prob.a = *cfg.a;
    prob.beta = cfg.beta ? *cfg.beta : origin(cfg.dimension);
    prob.cert = config_cert(cfg.k, cfg.K);
    prob.cert2 = config_cert(cfg.k2, cfg.K2);

    GspDecision dec = decide_gsp(prob, cfg.radius);

    std::string csv = "lambda,theta,r_minus,r_plus\n";
    for (const auto& p : dec.spectrum_sample)
        csv += vec_text(p.lambda) + "," + fmt17(p.theta) + "," + fmt17(p.r_minus) + "," +
               fmt17(p.r_plus) + "\n";
    write_text(out_dir + "/two-translate.csv", csv);

    json r;
    r["is_gsp"] = dec.is_gsp;
    r["condition_i"] = dec.condition_i;
    r["condition_i_literal"] = dec.condition_i_literal;
    if (dec.condition_i_witness) r["condition_i_witness"] = vec_json(*dec.condition_i_witness);
    r["condition_ii"] = dec.condition_ii;
    if (dec.condition_ii_witness) r["condition_ii_witness"] = vec_json(*dec.condition_ii_witness);
    r["alpha"] = dec.alpha;
    r["mode"] = dec.mode;
    r["exact_mode"] = dec.exact_mode;
    r["inf_r_minus"] = dec.inf_r_minus;
    r["residue_min_r_minus"] = dec.residue_min_r_minus;
    json res = json::array();
    for (const auto& q : dec.residues) res.push_back(rational_to_string(q));
    r["residues"] = res;
    r["lambda_sets_disjoint"] = dec.lambda_sets_disjoint;
    r["constants_halved"] = dec.constants_halved;
    r["sample_count"] = dec.spectrum_sample.size();
    return r;
}

const char* overlap_name(OverlapClass c) {
    switch (c) {
        case OverlapClass::Disjoint: return "disjoint";
        case OverlapClass::NullOverlap: return "null-overlap";
        default: return "overlap";
    }
}

json cmd_iterate(const JobConfig& cfg, const std::string& out_dir) {
    if (cfg.depth < 0) bad("cli.bad-depth", "depth must be nonnegative");
    AffineSystem sys = need_system(cfg, true);
    IterationState st = make_initial_state(sys, need_domain(cfg), cfg.lambda0);
    for (int i = 0; i < cfg.depth; ++i) st = iterate(st);
    ExactVec t = cfg.t ? *cfg.t : origin(cfg.dimension);

    SpectralSumSeries series;
    double eps = 0.0;
    if (cfg.depth >= 1) {
        LowerBoundEstimate lb = lower_bound_estimate(st, t, cfg.depth);
        series = lb.series;
        eps = lb.epsilon_hat;
    } else {
        series = spectral_sum_series(st, t, 0);
        eps = series.entries.front().s;
    }

    std::string csv = "j,S_j,trunc_err\n";
    for (const auto& e : series.entries)
        csv += std::to_string(e.j) + "," + fmt17(e.s) + "," + fmt17(e.truncation_error) + "\n";
    write_text(out_dir + "/iterate.csv", csv);

    json r;
    r["depth"] = cfg.depth;
    r["epsilon_hat"] = eps;
    r["t"] = vec_json(t);
    json entries = json::array();
    for (const auto& e : series.entries) {
        json je;
        je["j"] = e.j;
        je["s"] = e.s;
        je["truncation_error"] = e.truncation_error;
        entries.push_back(je);
    }
    r["entries"] = entries;
    json ov = json::array();
    for (OverlapClass c : st.overlaps) ov.push_back(overlap_name(c));
    r["overlaps"] = ov;
    r["spectrum_size"] = st.lambdas.back().size();
    return r;
}

json cmd_muhat(const JobConfig& cfg, const std::string& out_dir) {
    AffineSystem sys = need_system(cfg, false);
    std::vector<ExactVec> pts = need_spectrum(cfg).enumerate(cfg.radius);
    std::vector<TransformValue> vals(pts.size());
    if (cfg.limit) {
        for (size_t i = 0; i < pts.size(); ++i) vals[i] = mu_hat_limit(sys, pts[i]);
    } else {
        if (cfg.depth < 0) bad("cli.bad-depth", "depth must be nonnegative");
        const Domain& omega0 = need_domain(cfg);
        for (size_t i = 0; i < pts.size(); ++i)
            vals[i] = mu_hat_n(sys, omega0, cfg.depth, pts[i]);
    }

    std::string csv = "lambda,re,im,abs_err\n";
    double max_err = 0.0;
    for (size_t i = 0; i < pts.size(); ++i) {
        csv += vec_text(pts[i]) + "," + fmt17(vals[i].value.real()) + "," +
               fmt17(vals[i].value.imag()) + "," + fmt17(vals[i].abs_error_bound) + "\n";
        max_err = std::max(max_err, vals[i].abs_error_bound);
    }
    write_text(out_dir + "/muhat.csv", csv);

    json r;
    r["limit"] = cfg.limit;
    if (!cfg.limit) r["depth"] = cfg.depth;
    r["points"] = pts.size();
    r["max_abs_error"] = max_err;
    return r;
}

json cmd_reverse(const JobConfig& cfg, const std::string& out_dir) {
    std::optional<FrameCertificate> cert = config_cert(cfg.k, cfg.K);
    if (!cert) bad("cli.missing-field", "reverse needs union constants \"k\" and \"K\"");
    ReverseResult res =
        reverse_spectrum(need_domain(cfg), need_B(cfg), need_spectrum(cfg), *cert, cfg.radius);

    std::vector<ExactVec> members = res.lambda_omega.enumerate(cfg.radius);
    std::string csv = "lambda\n";
    for (const auto& m : members) csv += vec_text(m) + "\n";
    write_text(out_dir + "/reverse.csv", csv);

    json r;
    r["certificate"] = cert_json(res.certificate);
    r["member_count"] = members.size();
    json ms = json::array();
    for (const auto& m : members) ms.push_back(vec_json(m));
    r["members"] = ms;
    r["zero_witness_count"] = res.zero_witnesses.size();
    return r;
}

json cmd_classify1d(const JobConfig& cfg, const std::string&) {
    ClassifyResult res = classify_1d(need_B(cfg), need_spectrum(cfg), cfg.radius);
    json r;
    r["valid"] = res.valid;
    json l = json::array();
    for (const auto& s : res.L) l.push_back(s.to_string());
    r["L"] = l;
    json vs = json::array();
    for (const auto& v : res.violations) {
        json jv;
        jv["code"] = v.code;
        jv["detail"] = v.detail;
        if (v.witness) jv["witness"] = vec_json(*v.witness);
        vs.push_back(jv);
    }
    r["violations"] = vs;
    return r;
}

json cmd_searchL(const JobConfig& cfg, const std::string& out_dir) {
    const std::vector<RationalVec>& B = need_B(cfg);
    std::vector<Rational> b1;
    for (const auto& b : B) {
        if (b.size() != 1) bad("cli.bad-config", "searchL works on one-dimensional B");
        b1.push_back(b[0]);
    }
    if (cfg.denominator_bound <= 0)
        bad("cli.missing-field", "searchL needs a positive denominator bound \"q\"");
    std::vector<std::vector<Rational>> found = search_L(b1, cfg.denominator_bound);

    std::string csv;
    for (size_t i = 0; i < b1.size(); ++i) {
        if (i) csv += ',';
        csv += "l" + std::to_string(i);
    }
    csv += "\n";
    for (const auto& cand : found) {
        for (size_t i = 0; i < cand.size(); ++i) {
            if (i) csv += ',';
            csv += rational_to_string(cand[i]);
        }
        csv += "\n";
    }
    write_text(out_dir + "/searchL.csv", csv);

    json r;
    r["candidate_count"] = found.size();
    json cands = json::array();
    for (const auto& cand : found) {
        json jc = json::array();
        for (const auto& q : cand) jc.push_back(rational_to_string(q));
        cands.push_back(jc);
    }
    r["candidates"] = cands;
    r["denominator_bound"] = cfg.denominator_bound;
    return r;
}

json estimate_json(const GridFrameEstimate& est) {
    json r;
    r["k_hat"] = est.k_hat;
    r["K_hat"] = est.K_hat;
    r["degenerate"] = est.degenerate;
    r["grid_points_per_cell"] = est.grid_points_per_cell;
    r["lambda_truncation"] = est.lambda_truncation;
    r["rayleigh_iterations"] = est.rayleigh_iterations;
    r["resolved_modes"] = est.resolved_modes;
    r["volume"] = est.volume;
    return r;
}

json cmd_framebounds(const JobConfig& cfg, const std::string&) {
    GridFrameEstimate est =
        estimate_bounds(need_domain(cfg), need_spectrum(cfg), cfg.grid, cfg.radius);
    return estimate_json(est);
}

json cmd_scalecheck(const JobConfig& cfg, const std::string&) {
    if (!cfg.R) bad("cli.missing-field", "scalecheck needs the scaling matrix \"R\"");
    const Domain& dom = need_domain(cfg);
    const SpectrumSpec& spec = need_spectrum(cfg);

    GridFrameEstimate base = estimate_bounds(dom, spec, cfg.grid, cfg.radius);

    // Map the very same truncated point set so both estimates resolve matched
    // subspaces; the scaled truncation radius is the image's own extent.
    FiniteSet trunc;
    trunc.points = spec.enumerate(cfg.radius);
    ScaledPair scaled_pair = scale_pair(*cfg.R, dom, SpectrumSpec(std::move(trunc)));
    ExactScalar srad(0);
    if (const FiniteSet* fs = scaled_pair.lambda.finite())
        for (const auto& p : fs->points)
            for (const auto& c : p)
                if (c.abs() > srad) srad = c.abs();
    if (!(srad > ExactScalar(0))) srad = ExactScalar(1);
    GridFrameEstimate scaled = estimate_bounds(scaled_pair.omega, scaled_pair.lambda, cfg.grid, srad);

    json r;
    r["base"] = estimate_json(base);
    r["scaled"] = estimate_json(scaled);
    r["det"] = rational_to_string(cfg.R->determinant());

    double nb_k = base.volume > 0 ? base.k_hat / base.volume : 0.0;
    double nb_K = base.volume > 0 ? base.K_hat / base.volume : 0.0;
    double ns_k = scaled.volume > 0 ? scaled.k_hat / scaled.volume : 0.0;
    double ns_K = scaled.volume > 0 ? scaled.K_hat / scaled.volume : 0.0;
    r["normalized_k_base"] = nb_k;
    r["normalized_K_base"] = nb_K;
    r["normalized_k_scaled"] = ns_k;
    r["normalized_K_scaled"] = ns_K;
    auto rel = [](double x, double y) {
        double m = std::max(std::abs(x), std::abs(y));
        return m > 0 ? std::abs(x - y) / m : 0.0;
    };
    double dev = std::max(rel(nb_k, ns_k), rel(nb_K, ns_K));
    r["max_relative_deviation"] = dev;
    r["consistent"] = dev <= 0.05;
    return r;
}

json dispatch(const std::string& command, const JobConfig& cfg, const std::string& out_dir) {
    if (command == "elliptic") return cmd_elliptic(cfg, out_dir);
    if (command == "extend") return cmd_extend(cfg, out_dir);
    if (command == "two-translate") return cmd_two_translate(cfg, out_dir);
    if (command == "iterate") return cmd_iterate(cfg, out_dir);
    if (command == "muhat") return cmd_muhat(cfg, out_dir);
    if (command == "reverse") return cmd_reverse(cfg, out_dir);
    if (command == "classify1d") return cmd_classify1d(cfg, out_dir);
    if (command == "searchL") return cmd_searchL(cfg, out_dir);
    if (command == "framebounds") return cmd_framebounds(cfg, out_dir);
    if (command == "scalecheck") return cmd_scalecheck(cfg, out_dir);
    bad("cli.unknown-command", "unknown command \"" + command + "\"");
}

int run_impl(int argc, const char* const* argv) {
    CLI::App app{"affine-frames: spectral pairs and exponential frames from affine systems"};
    std::string command;
    std::string config_path;
    std::string out_dir = ".";
    std::string radius_text;
    int depth = 0, grid = 0, threads = 0;
    std::uint64_t seed = 0;
    app.add_option("command", command,
                   "elliptic | extend | two-translate | iterate | muhat | reverse | classify1d "
                   "| searchL | framebounds | scalecheck")
        ->required();
    app.add_option("--config", config_path, "JSON job description (required)");
    app.add_option("--out", out_dir, "output directory (default .)");
    app.add_option("--radius", radius_text, "spectrum truncation radius, rational");
    app.add_option("--depth", depth, "iteration depth");
    app.add_option("--grid", grid, "grid points per box edge");
    app.add_option("--seed", seed, "random seed");
    app.add_option("--threads", threads, "worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 4;
    }

    if (config_path.empty()) bad("cli.missing-config", "every command takes --config PATH");
    JobConfig cfg = load_config(config_path);
    if (app.count("--radius")) cfg.radius = json_scalar(json(radius_text));
    if (app.count("--depth")) cfg.depth = depth;
    if (app.count("--grid")) cfg.grid = grid;
    if (app.count("--seed")) cfg.seed = seed;
    if (app.count("--threads")) cfg.threads = threads;
    if (cfg.threads) {
        if (*cfg.threads <= 0) bad("cli.bad-threads", "thread count must be positive");
        setenv("AFFINE_FRAMES_THREADS", std::to_string(*cfg.threads).c_str(), 1);
    }
    if (!(cfg.radius > ExactScalar(0))) bad("cli.bad-radius", "radius must be positive");

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) bad("cli.bad-out-dir", "cannot create output directory " + out_dir);

    json report = dispatch(command, cfg, out_dir);
    report["command"] = command;
    report["schema_version"] = 1;
    write_text(out_dir + "/report.json", report.dump(2) + "\n");
    return 0;
}

}  // namespace

JobConfig parse_config_text(const std::string& text) {
    json doc = json::parse(text);
    return parse_config_json(doc);
}

JobConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) bad("cli.missing-config", "cannot read config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

int run_cli(int argc, const char* const* argv) {
    try {
        return run_impl(argc, argv);
    } catch (const HypothesisError& e) {
        std::cerr << "error [" << e.condition() << "]: " << e.what() << "\n";
        return 2;
    } catch (const ArgumentError& e) {
        std::cerr << "error [" << e.condition() << "]: " << e.what() << "\n";
        return 4;
    } catch (const NumericDomainError& e) {
        std::cerr << "error [" << e.condition() << "]: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error [" << e.condition() << "]: " << e.what() << "\n";
        return 3;
    } catch (const json::exception& e) {
        std::cerr << "error [cli.bad-json]: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error [cli.internal]: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace af
