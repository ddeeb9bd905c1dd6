// krein: evaluate Nevanlinna models, sweep scattering data over a lambda grid
// and verify the Birman-Krein and trace identities.
//
// Exit codes: 0 success, 1 validation error, 2 numerical failure or FAIL,
// 3 parse / IO error.

#include <charconv>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "krein/errors.hpp"
#include "krein/model_io.hpp"
#include "krein/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitParse = 3;

using krein::Complex;

Complex parse_complex_arg(const std::string& text, const char* flag) {
    auto parse = [&](std::string_view s) {
        double v = 0.0;
        const char* first = s.data();
        const char* last = s.data() + s.size();
        if (first != last && *first == '+') ++first;
        const auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last || first == last) {
            throw krein::ParseError(std::string(flag) + ": cannot parse '" + text + "'");
        }
        return v;
    };
    const auto comma = text.find(',');
    if (comma == std::string::npos) return Complex(parse(text), 0.0);
    return Complex(parse(std::string_view(text).substr(0, comma)),
                   parse(std::string_view(text).substr(comma + 1)));
}

struct Check {
    std::string name;
    double value;
    double tol;
    bool pass;
};

class Report {
public:
    void add(std::string name, double value, double tol) {
        checks_.push_back({std::move(name), value, tol, value <= tol});
    }
    void add_report(const std::string& name, const krein::IdentityReport& r, double tol) {
        const bool pass = r.passes(tol);
        checks_.push_back({name, r.max_residual(), tol, pass});
    }
    bool all_pass() const {
        for (const auto& c : checks_) {
            if (!c.pass) return false;
        }
        return true;
    }
    void print(std::ostream& out) const {
        for (const auto& c : checks_) {
            out << c.name << ": max_residual=" << krein::format_double(c.value)
                << " tol=" << krein::format_double(c.tol) << " " << (c.pass ? "PASS" : "FAIL") << "\n";
        }
    }

private:
    std::vector<Check> checks_;
};

template <class Record>
void print_point_summary(const std::vector<Record>& records, std::ostream& out) {
    std::size_t skipped = 0;
    std::size_t failed = 0;
    for (const auto& r : records) {
        if (r.status == krein::PointStatus::Skipped) ++skipped;
        if (r.status == krein::PointStatus::Failed) {
            ++failed;
            std::cerr << "lambda=" << krein::format_double(r.lambda) << ": " << r.reason << "\n";
        }
    }
    out << "points: " << records.size() << "\n";
    out << "skipped: " << skipped << "\n";
    out << "failed: " << failed << "\n";
}

template <class Record, class Field>
double max_field(const std::vector<Record>& records, Field field) {
    double m = 0.0;
    for (const auto& r : records) {
        if (r.status == krein::PointStatus::Ok) m = std::max(m, field(r));
    }
    return m;
}

template <class Record>
bool any_failed(const std::vector<Record>& records) {
    for (const auto& r : records) {
        if (r.status == krein::PointStatus::Failed) return true;
    }
    return false;
}

const krein::SelfAdjointParameter& expect_selfadjoint(const krein::ParameterDocument& p) {
    if (const auto* v = std::get_if<krein::SelfAdjointParameter>(&p)) return *v;
    throw krein::ValidationError("mode sa requires a theta or relation parameter");
}

const krein::DissipativeParameter& expect_dissipative(const krein::ParameterDocument& p) {
    if (const auto* v = std::get_if<krein::DissipativeParameter>(&p)) return *v;
    throw krein::ValidationError("mode dissipative requires a dissipative parameter");
}

const krein::CoupledParameter& expect_coupled(const krein::ParameterDocument& p) {
    if (const auto* v = std::get_if<krein::CoupledParameter>(&p)) return *v;
    throw krein::ValidationError("mode coupled requires a coupled parameter");
}

int run_eval(const std::string& model_path, const std::string& lambda_text) {
    const auto model = krein::load_model(model_path);
    const Complex lambda = parse_complex_arg(lambda_text, "--lambda");
    const auto m = lambda.imag() == 0.0 ? model.boundary_value(lambda.real()) : model.eval(lambda);
    std::cout << krein::format_matrix(m) << "\n";
    return kExitOk;
}

int run_sweep(const std::string& model_path, const std::string& param_path, const std::string& grid_text,
              const std::string& mode, const std::string& out_path, double rank_tol) {
    const auto model = krein::load_model(model_path);
    const auto param = krein::load_parameter(param_path, model.dim());
    const auto grid = krein::GridSpec::parse(grid_text).points();
    bool failed = false;
    if (mode == "sa") {
        const auto records = krein::sweep_selfadjoint(model, expect_selfadjoint(param), grid, rank_tol);
        krein::write_sweep_csv<krein::SelfAdjointRecord>(records, out_path);
        failed = any_failed(records);
    } else if (mode == "dissipative") {
        const auto records = krein::sweep_dissipative(model, expect_dissipative(param), grid, rank_tol);
        krein::write_sweep_csv<krein::DissipativeRecord>(records, out_path);
        failed = any_failed(records);
    } else {
        const krein::CoupledSystem sys(model, expect_coupled(param).model_g);
        const auto records = krein::sweep_coupled(sys, grid, rank_tol);
        krein::write_sweep_csv<krein::CoupledRecord>(records, out_path);
        failed = any_failed(records);
    }
    if (failed) {
        std::cerr << "sweep: some grid points failed (skipped=2 rows in " << out_path << ")\n";
        return kExitNumerical;
    }
    return kExitOk;
}

struct VerifyOptions {
    Complex z{0.0, 1.0};
    double tol = 1e-8;
    double trace_tol = 1e-6;
    double rank_tol = krein::kDefaultRankTol;
};

constexpr double kUnitarityTol = 1e-10;

int run_verify(const std::string& model_path, const std::string& param_path, const std::string& grid_text,
               const std::string& mode, const VerifyOptions& opt) {
    const auto model = krein::load_model(model_path);
    const auto param = krein::load_parameter(param_path, model.dim());
    const auto grid = krein::GridSpec::parse(grid_text).points();
    if (opt.z.imag() == 0.0) throw krein::ValidationError("--z must have a nonzero imaginary part");
    const double quad_tol = 0.25 * opt.trace_tol;
    Report report;
    const std::string z_label = "trace_formula(z=" + krein::format_double(opt.z.real()) + "," +
                                krein::format_double(opt.z.imag()) + ")";

    if (mode == "sa") {
        const auto& theta = expect_selfadjoint(param);
        const auto records = krein::sweep_selfadjoint(model, theta, grid, opt.rank_tol);
        print_point_summary(records, std::cout);
        report.add_report("birman_krein", krein::collect(records, [](const auto& r) { return r.residual_bk; }),
                          opt.tol);
        report.add_report("unitarity", krein::collect(records, [](const auto& r) { return r.unitarity; }),
                          kUnitarityTol);
        report.add(z_label, krein::verify_trace_formula(model, theta, opt.z, quad_tol).residual, opt.trace_tol);
    } else if (mode == "dissipative") {
        const auto& dp = expect_dissipative(param);
        const auto records = krein::sweep_dissipative(model, dp, grid, opt.rank_tol);
        print_point_summary(records, std::cout);
        report.add_report("modified_bk", krein::collect(records, [](const auto& r) { return r.residual_bk; }),
                          opt.tol);
        report.add_report("modified_bk_dual",
                          krein::collect(records, [](const auto& r) { return r.residual_bk_dual; }), opt.tol);
        report.add_report("dilation_bk",
                          krein::collect(records, [](const auto& r) { return r.residual_full_bk; }), opt.tol);
        report.add_report("dilation_ssf_phase",
                          krein::collect(records, [](const auto& r) { return r.residual_dilation_ssf; }), opt.tol);
        report.add_report("adamyan_arov",
                          krein::collect(records, [](const auto& r) { return r.residual_adamyan_arov; }),
                          kUnitarityTol);
        report.add_report("unitarity", krein::collect(records, [](const auto& r) { return r.unitarity; }),
                          kUnitarityTol);
        const double excess = std::max(
            max_field(records, [](const auto& r) { return r.sigma_max_sd - 1.0; }),
            max_field(records, [](const auto& r) { return r.sigma_max_slp - 1.0; }));
        report.add("contraction", excess, kUnitarityTol);
        report.add(z_label, krein::verify_dissipative_trace_formula(model, dp, opt.z, quad_tol).residual,
                   opt.trace_tol);
    } else {
        const krein::CoupledSystem sys(model, expect_coupled(param).model_g);
        const auto records = krein::sweep_coupled(sys, grid, opt.rank_tol);
        print_point_summary(records, std::cout);
        report.add_report("coupled_bk", krein::collect(records, [](const auto& r) { return r.residual_bk; }),
                          opt.tol);
        report.add_report("coupled_bk_dual",
                          krein::collect(records, [](const auto& r) { return r.residual_bk_dual; }), opt.tol);
        report.add_report("classical_bk",
                          krein::collect(records, [](const auto& r) { return r.residual_full_bk; }), opt.tol);
        report.add_report("eta_channel_h",
                          krein::collect(records, [](const auto& r) { return r.residual_eta_h; }), opt.tol);
        report.add_report("eta_channel_g",
                          krein::collect(records, [](const auto& r) { return r.residual_eta_g; }), opt.tol);
        report.add_report("unitarity", krein::collect(records, [](const auto& r) { return r.unitarity; }),
                          kUnitarityTol);
        const double excess = std::max(
            max_field(records, [](const auto& r) { return r.sigma_max_sh - 1.0; }),
            max_field(records, [](const auto& r) { return r.sigma_max_sg - 1.0; }));
        report.add("contraction", excess, kUnitarityTol);
        report.add(z_label, krein::verify_coupled_trace_formula(sys, opt.z, quad_tol).residual, opt.trace_tol);
    }
    report.print(std::cout);
    return report.all_pass() ? kExitOk : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Scattering matrices, spectral shift functions and Birman-Krein identities from Weyl functions"};
    app.require_subcommand(1);

    std::string model_path;
    std::string param_path;
    std::string lambda_text;
    std::string grid_text;
    std::string mode;
    std::string out_path;
    std::string z_text = "0,1";
    VerifyOptions vopt;
    double sweep_rank_tol = krein::kDefaultRankTol;
    const std::vector<std::string> modes = {"sa", "dissipative", "coupled"};

    auto* eval = app.add_subcommand("eval", "Evaluate M(lambda); the boundary value M(lambda+i0) on the real axis");
    eval->add_option("--model", model_path, "Model file")->required();
    eval->add_option("--lambda", lambda_text, "RE or RE,IM")->required();

    auto* sweep = app.add_subcommand("sweep", "Per-lambda scattering/SSF table as CSV");
    sweep->add_option("--model", model_path, "Model file")->required();
    sweep->add_option("--param", param_path, "Parameter file")->required();
    sweep->add_option("--grid", grid_text, "A:B:N inclusive")->required();
    sweep->add_option("--mode", mode, "sa | dissipative | coupled")->required()->check(CLI::IsMember(modes));
    sweep->add_option("--out", out_path, "Output CSV")->required();
    sweep->add_option("--rank-tol", sweep_rank_tol, "Relative rank tolerance for ran Im M");

    auto* verify = app.add_subcommand("verify", "Check the identities over a grid and print PASS/FAIL");
    verify->add_option("--model", model_path, "Model file")->required();
    verify->add_option("--param", param_path, "Parameter file")->required();
    verify->add_option("--mode", mode, "sa | dissipative | coupled")->required()->check(CLI::IsMember(modes));
    verify->add_option("--grid", grid_text, "A:B:N inclusive")->required();
    verify->add_option("--z", z_text, "Spectral point RE,IM for the trace formula");
    verify->add_option("--tol", vopt.tol, "Tolerance for the algebraic identities");
    verify->add_option("--trace-tol", vopt.trace_tol, "Tolerance for the quadrature-backed trace formula");
    verify->add_option("--rank-tol", vopt.rank_tol, "Relative rank tolerance for ran Im M");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitParse;
    }

    try {
        if (*eval) return run_eval(model_path, lambda_text);
        if (*sweep) return run_sweep(model_path, param_path, grid_text, mode, out_path, sweep_rank_tol);
        vopt.z = parse_complex_arg(z_text, "--z");
        return run_verify(model_path, param_path, grid_text, mode, vopt);
    } catch (const krein::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const krein::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitParse;
    } catch (const krein::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const krein::DimensionError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const krein::ExceptionalPointError& e) {
        std::cerr << "ExceptionalPointError: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const krein::Error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    }
}
