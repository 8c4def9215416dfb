// jtvol: exact spectral-curve recursion, volume polynomials, JT partition
// functions, and the finite-N matrix laboratory, behind one command-line
// surface.  See README.md for the output schemas.

#include <CLI11.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "jtvol/acceptance.hpp"
#include "jtvol/ensembles.hpp"
#include "jtvol/numeric.hpp"
#include "jtvol/partition.hpp"
#include "jtvol/quadrature.hpp"
#include "jtvol/residue_oracle.hpp"
#include "jtvol/stats.hpp"
#include "jtvol/volumes.hpp"

namespace {

using namespace jtvol;

constexpr const char* kVersion = "1.0.0";

// exit codes: 0 success, 1 check failure, 2 usage error, 3 capacity error
constexpr int kOk = 0, kCheckFail = 1, kUsage = 2, kCapacity = 3;

// Flat key=value configuration file; '#' starts a comment.  Flags given
// on the command line override file values; environment variables are
// never consulted.
std::map<std::string, std::string> load_config(const std::string& path, bool required) {
    std::map<std::string, std::string> kv;
    std::ifstream is(path);
    if (!is) {
        if (required) throw std::runtime_error("cannot open config file " + path);
        return kv;
    }
    std::string line;
    while (std::getline(is, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            size_t a = s.find_first_not_of(" \t\r");
            size_t b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
        if (!key.empty()) kv[key] = val;
    }
    return kv;
}

struct Common {
    std::string config_path = "jtvol.conf";
    bool config_explicit = false;
    std::map<std::string, std::string> file;
    int threads = 0;

    std::string get(const std::string& key, const std::string& fallback) const {
        auto it = file.find(key);
        return it == file.end() ? fallback : it->second;
    }
};

Json config_echo(const Common& c, const std::map<std::string, std::string>& resolved) {
    Json j;
    j["tool"] = "jtvol";
    j["version"] = kVersion;
    Json cfg;
    for (const auto& [k, v] : resolved) cfg[k] = v;
    j["config"] = std::move(cfg);
    (void)c;
    return j;
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream os(out_path);
    if (!os) throw std::runtime_error("cannot open output file " + out_path);
    os << text;
}

std::string csv_header(const std::map<std::string, std::string>& resolved) {
    std::ostringstream os;
    os << "# jtvol " << kVersion << "\n# ";
    bool first = true;
    for (const auto& [k, v] : resolved) {
        os << (first ? "" : " ") << k << "=" << v;
        first = false;
    }
    os << "\n";
    return os.str();
}

std::string fmt17(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

SpectralCurve make_curve(const std::string& name, const std::string& slope, int order) {
    if (name == "bosonic" || name == "jt") return SpectralCurve::jt(order);
    if (name == "super") return SpectralCurve::jt_super(order);
    if (name == "airy") return SpectralCurve::airy(Rational::from_string(slope), order);
    throw CLI::ValidationError("--curve", "unknown curve '" + name + "'");
}

std::vector<Rational> parse_potential(const std::string& csv) {
    std::vector<Rational> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(Rational::from_string(tok));
    return out;
}

std::vector<double> parse_doubles(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

// ---------------- volumes / correlators ----------------

int cmd_volumes(const Common& common, const std::string& curve_name, const std::string& slope,
                int g, int n, int order, const std::string& convention,
                const std::vector<std::string>& evals, const std::string& format,
                const std::string& out) {
    if (2 * g - 2 + n <= 0) {
        std::cerr << "volumes: unstable (g,n): need 2g-2+n > 0\n";
        return kUsage;
    }
    if (order <= 0) order = required_series_order(g, n);
    SpectralCurve curve = make_curve(curve_name, slope, order);
    RecursionEngine engine(std::move(curve));
    VolumePolynomial v = VolumePolynomial::from_correlator(engine.correlator(g, n));

    std::map<std::string, std::string> resolved{{"command", "volumes"},
                                                {"curve", curve_name},
                                                {"g", std::to_string(g)},
                                                {"n", std::to_string(n)},
                                                {"order", std::to_string(order)},
                                                {"convention", convention}};
    if (curve_name == "airy") resolved["slope"] = slope;

    if (format == "csv") {
        std::ostringstream os;
        os << csv_header(resolved) << v.to_csv(convention);
        if (!evals.empty()) {
            os << "b,value\n";
            for (const auto& e : evals) {
                std::vector<double> b = parse_doubles(e);
                double scale = (convention == "mirzakhani" && g == 1 && n == 1) ? 2.0 : 1.0;
                for (size_t i = 0; i < b.size(); ++i) os << (i ? " " : "") << fmt17(b[i]);
                os << "," << fmt17(scale * v.evaluate(b)) << "\n";
            }
        }
        emit(out, os.str());
    } else {
        Json j = config_echo(common, resolved);
        j["volume"] = v.to_json(convention);
        if (!evals.empty()) {
            Json ev = Json::array();
            for (const auto& e : evals) {
                std::vector<double> b = parse_doubles(e);
                double scale = (convention == "mirzakhani" && g == 1 && n == 1) ? 2.0 : 1.0;
                Json row;
                row["b"] = b;
                row["value"] = scale * v.evaluate(b);
                ev.push_back(std::move(row));
            }
            j["evaluations"] = std::move(ev);
        }
        emit(out, j.dump(2) + "\n");
    }
    return kOk;
}

int cmd_correlators(const Common& common, const std::string& curve_name, const std::string& slope,
                    int g, int n, int order, const std::string& save_memo,
                    const std::string& load_memo, const std::string& out) {
    if (2 * g - 2 + n <= 0) {
        std::cerr << "correlators: unstable (g,n): need 2g-2+n > 0\n";
        return kUsage;
    }
    if (order <= 0) order = required_series_order(g, n);
    RecursionEngine engine(make_curve(curve_name, slope, order));
    if (!load_memo.empty()) engine.load(load_memo);
    const Correlator& w = engine.correlator(g, n);
    if (!save_memo.empty()) engine.save(save_memo);

    std::map<std::string, std::string> resolved{{"command", "correlators"},
                                                {"curve", curve_name},
                                                {"g", std::to_string(g)},
                                                {"n", std::to_string(n)},
                                                {"order", std::to_string(order)}};
    Json j = config_echo(common, resolved);
    j["curve"] = engine.curve().name();
    j["g"] = g;
    j["n"] = n;
    Json terms = Json::array();
    for (const auto& [k, c] : w.terms()) terms.push_back(Json::array({k, scalar_to_json(c)}));
    j["terms"] = std::move(terms);
    emit(out, j.dump(2) + "\n");
    return kOk;
}

// ---------------- density / partition / trumpet ----------------

int cmd_density(const Common& common, const std::string& curve_name, const std::string& slope,
                double S, const std::vector<double>& grid, const std::string& out) {
    for (double e : grid)
        if (!(e > 0.0)) {
            std::cerr << "density: grid points must be positive\n";
            return kUsage;
        }
    SpectralCurve curve = make_curve(curve_name, slope, 7);
    std::map<std::string, std::string> resolved{
        {"command", "density"}, {"curve", curve_name}, {"S", fmt17(S)}};
    std::ostringstream os;
    os << csv_header(resolved) << "E,rho\n";
    DensityParams params{S};
    for (double e : grid) os << fmt17(e) << "," << fmt17(curve.density_of_states(e, params)) << "\n";
    emit(out, os.str());
    (void)common;
    return kOk;
}

int cmd_partition(const Common& common, const std::string& kind, int g, double S,
                  const std::vector<double>& betas, const std::string& route,
                  const std::string& out) {
    for (double b : betas)
        if (!(b > 0.0)) {
            std::cerr << "partition: beta grid must be positive\n";
            return kUsage;
        }
    std::map<std::string, std::string> resolved{
        {"command", "partition"}, {"kind", kind}, {"S", fmt17(S)}, {"route", route}};
    std::ostringstream os;
    if (kind == "disc") {
        os << csv_header(resolved) << "beta,value\n";
        for (double b : betas) os << fmt17(b) << "," << fmt17(disc_partition(b, S)) << "\n";
    } else if (kind == "genus") {
        if (g < 1) {
            std::cerr << "partition: genus kind needs --g >= 1 (disc handled separately)\n";
            return kUsage;
        }
        resolved["g"] = std::to_string(g);
        RecursionEngine engine(SpectralCurve::jt(required_series_order(g, 1)));
        os << csv_header(resolved) << "beta,value\n";
        for (double b : betas) {
            double v = route == "correlator" ? genus_partition_via_correlator(g, b, S, engine)
                                             : genus_partition_via_gluing(g, b, S, engine);
            os << fmt17(b) << "," << fmt17(v) << "\n";
        }
    } else {
        std::cerr << "partition: unknown kind '" << kind << "'\n";
        return kUsage;
    }
    emit(out, os.str());
    (void)common;
    return kOk;
}

int cmd_trumpet(const Common& common, const std::vector<double>& bs, double beta,
                const std::string& out) {
    if (!(beta > 0.0)) {
        std::cerr << "trumpet: beta must be positive\n";
        return kUsage;
    }
    std::map<std::string, std::string> resolved{{"command", "trumpet"}, {"beta", fmt17(beta)}};
    std::ostringstream os;
    os << csv_header(resolved) << "b,value\n";
    for (double b : bs) {
        if (b < 0.0) {
            std::cerr << "trumpet: b must be nonnegative\n";
            return kUsage;
        }
        os << fmt17(b) << "," << fmt17(trumpet(b, beta)) << "\n";
    }
    emit(out, os.str());
    (void)common;
    return kOk;
}

// ---------------- mc ----------------

int cmd_mc(const Common& common, EnsembleConfig cfg, const std::string& kind_name,
           const std::string& format, const std::string& histogram, const std::string& out) {
    cfg.validate();
    SampleBatch batch = sample(cfg);

    std::map<std::string, std::string> resolved{{"command", "mc"},
                                                {"kind", kind_name},
                                                {"N", std::to_string(cfg.N)},
                                                {"draws", std::to_string(cfg.draws)},
                                                {"seed", std::to_string(cfg.seed)},
                                                {"nu", std::to_string(cfg.nu)},
                                                {"mode", cfg.mode == ExecMode::OpenMP ? "openmp" : "serial"}};
    if (format == "json") {
        Json j = config_echo(common, resolved);
        j["batch"] = batch.to_json();
        emit(out, j.dump(2) + "\n");
    } else {
        emit(out, csv_header(resolved) + batch.to_csv());
    }

    if (!histogram.empty()) {
        std::vector<double> spec = parse_doubles(histogram);
        if (spec.size() != 3) {
            std::cerr << "mc: --histogram wants bins,lo,hi\n";
            return kUsage;
        }
        HistogramStats h = histogram_and_stats(batch.pooled(), nullptr,
                                               static_cast<int>(spec[0]), spec[1], spec[2], true);
        std::ostringstream os;
        os << csv_header(resolved) << "bin_center,density\n";
        for (size_t i = 0; i + 1 < h.edges.size(); ++i)
            os << fmt17(0.5 * (h.edges[i] + h.edges[i + 1])) << "," << fmt17(h.density[i]) << "\n";
        emit(out.empty() || out == "-" ? out : out + ".hist.csv", os.str());
    }
    return kOk;
}

// ---------------- check ----------------

int cmd_check(const Common& common, const std::string& suite_name, const std::string& golden,
              const std::string& out) {
    Suite suite = suite_name == "fast" ? Suite::Fast : Suite::Full;
    GoldenOverride g{golden};
    std::vector<CriterionResult> results = run_acceptance(suite, g);
    for (const auto& r : results)
        std::cout << (r.pass ? "PASS" : "FAIL") << " criterion " << r.id << ": " << r.name << "\n";
    Json report = acceptance_report(suite, results);
    report["config"] = Json{{"command", "check"}, {"suite", suite_name}, {"golden", golden}};
    if (!out.empty()) {
        std::ofstream os(out);
        if (!os) throw std::runtime_error("cannot open report file " + out);
        os << report.dump(2) << "\n";
    }
    (void)common;
    return all_pass(results) ? kOk : kCheckFail;
}

// ---------------- dump-curve ----------------

int cmd_dump_curve(const Common& common, const std::string& curve_name, const std::string& slope,
                   int order, const std::string& out) {
    if (order <= 0) order = default_series_order(2);
    SpectralCurve curve = make_curve(curve_name, slope, order);
    std::map<std::string, std::string> resolved{
        {"command", "dump-curve"}, {"curve", curve_name}, {"order", std::to_string(order)}};
    Json j = config_echo(common, resolved);
    j["name"] = curve.name();
    j["edge_class"] = curve.edge_class() == EdgeClass::Hard ? "hard" : "regular";
    j["density_sign"] = curve.density_sign();
    j["series"] = series_to_json(curve.y());
    std::ostringstream human;
    human << "y(z) = " << curve.y().str();
    j["rendering"] = human.str();
    Json numeric = Json::array();
    for (int e = curve.y().lo(); e <= curve.y().order(); ++e) {
        if (curve.y().coeff(e).is_zero()) continue;
        Json t;
        t["z_exp"] = e;
        t["value"] = evaluate_decimal(curve.y().coeff(e), 20);
        numeric.push_back(std::move(t));
    }
    j["numeric_coefficients"] = std::move(numeric);
    emit(out, j.dump(2) + "\n");
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact topological recursion on JT spectral curves with a finite-N matrix lab"};
    app.set_version_flag("--version", std::string("jtvol ") + kVersion);
    app.require_subcommand(1);

    Common common;
    app.add_option("--config", common.config_path, "flat key=value config file")
        ->each([&common](const std::string&) { common.config_explicit = true; });
    app.add_option("--threads", common.threads, "OpenMP thread cap (0 = library default)");

    // volumes
    auto* sv = app.add_subcommand("volumes", "Weil-Petersson volume polynomial V_{g,n}");
    std::string v_curve = "bosonic", v_slope = "1/2", v_conv, v_format, v_out;
    int v_g = 0, v_n = 0, v_order = 0;
    std::vector<std::string> v_eval;
    sv->add_option("--curve", v_curve, "bosonic|super|airy");
    sv->add_option("--slope", v_slope, "airy slope (rational)");
    sv->add_option("--g", v_g, "genus")->required();
    sv->add_option("--n", v_n, "boundary count")->required();
    sv->add_option("--order", v_order, "series order (0 = auto)");
    sv->add_option("--convention", v_conv, "jt|mirzakhani");
    sv->add_option("--eval", v_eval, "boundary lengths b1,b2,... (repeatable)");
    sv->add_option("--format", v_format, "json|csv");
    sv->add_option("--out", v_out, "output path (default stdout)");

    // correlators
    auto* sc = app.add_subcommand("correlators", "recursion correlator w_{g,n}");
    std::string c_curve = "bosonic", c_slope = "1/2", c_save, c_load, c_out;
    int c_g = 0, c_n = 0, c_order = 0;
    sc->add_option("--curve", c_curve, "bosonic|super|airy");
    sc->add_option("--slope", c_slope, "airy slope (rational)");
    sc->add_option("--g", c_g)->required();
    sc->add_option("--n", c_n)->required();
    sc->add_option("--order", c_order, "series order (0 = auto)");
    sc->add_option("--save-memo", c_save, "persist the memo table to this path");
    sc->add_option("--load-memo", c_load, "preload a memo table");
    sc->add_option("--out", c_out);

    // density
    auto* sd = app.add_subcommand("density", "density of states on an E grid");
    std::string d_curve = "bosonic", d_slope = "1/2", d_out;
    double d_S = 0.0, d_emin = 0.1, d_emax = 5.0;
    int d_steps = 50;
    std::vector<double> d_points;
    sd->add_option("--curve", d_curve);
    sd->add_option("--slope", d_slope);
    sd->add_option("--S", d_S, "entropy parameter");
    sd->add_option("--emin", d_emin);
    sd->add_option("--emax", d_emax);
    sd->add_option("--steps", d_steps);
    sd->add_option("--E", d_points, "explicit grid points (overrides the range)");
    sd->add_option("--out", d_out);

    // partition
    auto* sp = app.add_subcommand("partition", "disc or genus-g partition function");
    std::string p_kind = "disc", p_route = "gluing", p_out;
    int p_g = 1;
    double p_S = 0.0;
    std::vector<double> p_betas{1.0};
    sp->add_option("--kind", p_kind, "disc|genus");
    sp->add_option("--g", p_g, "genus (genus kind)");
    sp->add_option("--S", p_S);
    sp->add_option("--beta", p_betas, "beta grid (repeatable)");
    sp->add_option("--route", p_route, "gluing|correlator");
    sp->add_option("--out", p_out);

    // trumpet
    auto* st = app.add_subcommand("trumpet", "trumpet partition function");
    std::vector<double> t_bs{0.0};
    double t_beta = 1.0;
    std::string t_out;
    st->add_option("--b", t_bs, "geodesic boundary lengths (repeatable)");
    st->add_option("--beta", t_beta);
    st->add_option("--out", t_out);

    // mc
    auto* sm = app.add_subcommand("mc", "finite-N ensemble sampler");
    std::string m_kind = "gue", m_pot, m_format, m_mode, m_hist, m_out;
    EnsembleConfig m_cfg;
    sm->add_option("--kind", m_kind, "gue|potential|susy");
    sm->add_option("--N", m_cfg.N)->required();
    sm->add_option("--draws", m_cfg.draws);
    sm->add_option("--seed", m_cfg.seed);
    sm->add_option("--nu", m_cfg.nu, "susy index");
    sm->add_option("--potential", m_pot, "T coefficients c0,c1,... (degree ascending)");
    sm->add_option("--steps", m_cfg.chain.steps);
    sm->add_option("--burn-in", m_cfg.chain.burn_in);
    sm->add_option("--step-size", m_cfg.chain.step_size);
    sm->add_option("--draws-per-chain", m_cfg.chain.draws_per_chain);
    sm->add_option("--mode", m_mode, "serial|openmp");
    sm->add_option("--format", m_format, "csv|json");
    sm->add_option("--histogram", m_hist, "bins,lo,hi");
    sm->add_option("--out", m_out);

    // check
    auto* sk = app.add_subcommand("check", "run the acceptance suite");
    std::string k_suite, k_golden, k_out;
    sk->add_option("--suite", k_suite, "fast|full");
    sk->add_option("--golden", k_golden, "golden values file to verify against");
    sk->add_option("--out", k_out, "write the JSON report here");

    // dump-curve
    auto* sdc = app.add_subcommand("dump-curve", "exact curve series with numeric rendering");
    std::string dc_curve = "bosonic", dc_slope = "1/2", dc_out;
    int dc_order = 0;
    sdc->add_option("--curve", dc_curve);
    sdc->add_option("--slope", dc_slope);
    sdc->add_option("--order", dc_order);
    sdc->add_option("--out", dc_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        common.file = load_config(common.config_path, common.config_explicit);
        // config-file defaults for values not set on the command line
        if (v_conv.empty()) v_conv = common.get("convention", "jt");
        if (v_format.empty()) v_format = common.get("format", "json");
        if (m_format.empty()) m_format = common.get("mc.format", "csv");
        if (m_mode.empty()) m_mode = common.get("mc.mode", "openmp");
        if (k_suite.empty()) k_suite = common.get("check.suite", "full");
        if (k_golden.empty()) k_golden = common.get("check.golden", "");
        if (common.threads == 0) common.threads = std::stoi(common.get("threads", "0"));
        if (!sm->count("--seed")) m_cfg.seed = std::stoull(common.get("mc.seed", "1"));
        if (!sm->count("--draws")) m_cfg.draws = std::stoi(common.get("mc.draws", "100"));

#ifdef _OPENMP
        if (common.threads > 0) omp_set_num_threads(common.threads);
#endif

        if (sv->parsed()) {
            if (v_conv != "jt" && v_conv != "mirzakhani") {
                std::cerr << "volumes: unknown convention '" << v_conv << "'\n";
                return kUsage;
            }
            return cmd_volumes(common, v_curve, v_slope, v_g, v_n, v_order, v_conv, v_eval,
                               v_format, v_out);
        }
        if (sc->parsed())
            return cmd_correlators(common, c_curve, c_slope, c_g, c_n, c_order, c_save, c_load,
                                   c_out);
        if (sd->parsed()) {
            std::vector<double> grid = d_points;
            if (grid.empty()) {
                if (d_steps < 1 || !(d_emin > 0.0) || !(d_emax >= d_emin)) {
                    std::cerr << "density: bad grid\n";
                    return kUsage;
                }
                for (int i = 0; i < d_steps; ++i)
                    grid.push_back(d_emin + (d_emax - d_emin) * i / std::max(1, d_steps - 1));
            }
            return cmd_density(common, d_curve, d_slope, d_S, grid, d_out);
        }
        if (sp->parsed()) return cmd_partition(common, p_kind, p_g, p_S, p_betas, p_route, p_out);
        if (st->parsed()) return cmd_trumpet(common, t_bs, t_beta, t_out);
        if (sm->parsed()) {
            if (m_kind == "gue") m_cfg.kind = EnsembleKind::GaussianHermitian;
            else if (m_kind == "potential") m_cfg.kind = EnsembleKind::PolynomialPotential;
            else if (m_kind == "susy") m_cfg.kind = EnsembleKind::SusyBlock;
            else {
                std::cerr << "mc: unknown kind '" << m_kind << "'\n";
                return kUsage;
            }
            if (!m_pot.empty()) m_cfg.potential = parse_potential(m_pot);
            if (m_mode == "serial") m_cfg.mode = ExecMode::Serial;
            else if (m_mode == "openmp") m_cfg.mode = ExecMode::OpenMP;
            else {
                std::cerr << "mc: unknown mode '" << m_mode << "'\n";
                return kUsage;
            }
            return cmd_mc(common, m_cfg, m_kind, m_format, m_hist, m_out);
        }
        if (sk->parsed()) {
            if (k_suite != "fast" && k_suite != "full") {
                std::cerr << "check: unknown suite '" << k_suite << "'\n";
                return kUsage;
            }
            return cmd_check(common, k_suite, k_golden, k_out);
        }
        if (sdc->parsed()) return cmd_dump_curve(common, dc_curve, dc_slope, dc_order, dc_out);
        return kUsage;
    } catch (const CapacityError& e) {
        std::cerr << "capacity error: " << e.what() << "\n";
        return kCapacity;
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid arguments: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
}
