#include "krein/model_io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "krein/errors.hpp"

namespace krein {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

json parse_json(std::string_view text, const char* what) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ParseError(std::string(what) + ": " + e.what());
    }
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object()) throw ParseError(path + ": expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(path + ": missing field '" + key + "'");
    return *it;
}

std::string child(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

double read_real(const json& v, const std::string& path) {
    if (!v.is_number()) throw ParseError(path + ": expected a number");
    return v.get<double>();
}

Complex read_complex(const json& v, const std::string& path) {
    if (v.is_number()) return Complex(v.get<double>(), 0.0);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        throw ParseError(path + ": expected a complex entry [re, im]");
    }
    return Complex(v[0].get<double>(), v[1].get<double>());
}

ComplexMatrix read_matrix(const json& v, const std::string& path) {
    if (!v.is_array()) throw ParseError(path + ": expected a matrix (array of rows)");
    const auto rows = static_cast<Eigen::Index>(v.size());
    Eigen::Index cols = -1;
    ComplexMatrix m;
    for (Eigen::Index i = 0; i < rows; ++i) {
        const json& row = v[static_cast<std::size_t>(i)];
        const std::string row_path = path + "[" + std::to_string(i) + "]";
        if (!row.is_array()) throw ParseError(row_path + ": expected a row array");
        if (cols < 0) {
            cols = static_cast<Eigen::Index>(row.size());
            m.resize(rows, cols);
        } else if (static_cast<Eigen::Index>(row.size()) != cols) {
            throw ParseError(row_path + ": ragged matrix rows");
        }
        for (Eigen::Index j = 0; j < cols; ++j) {
            m(i, j) = read_complex(row[static_cast<std::size_t>(j)], row_path + "[" + std::to_string(j) + "]");
        }
    }
    if (rows == 0) m.resize(0, 0);
    if (!m.allFinite()) throw ParseError(path + ": non-finite entry");
    return m;
}

void expect_square(const ComplexMatrix& m, int dim, const std::string& path) {
    if (m.rows() != dim || m.cols() != dim) {
        std::ostringstream os;
        os << path << ": expected " << dim << "x" << dim << ", got " << m.rows() << "x" << m.cols();
        throw ValidationError(os.str());
    }
}

ordered_json write_matrix(const ComplexMatrix& m) {
    ordered_json rows = ordered_json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

HerglotzTerm read_term(const json& t, int dim, const std::string& path) {
    const json& kind_v = require(t, "kind", path);
    if (!kind_v.is_string()) throw ParseError(child(path, "kind") + ": expected a string");
    const std::string kind = kind_v.get<std::string>();
    auto mat = [&](const char* key) {
        ComplexMatrix m = read_matrix(require(t, key, path), child(path, key));
        expect_square(m, dim, child(path, key));
        return m;
    };
    auto real = [&](const char* key) { return read_real(require(t, key, path), child(path, key)); };
    if (kind == "constant") return ConstantTerm{mat("C")};
    if (kind == "affine") return AffineTerm{mat("A"), mat("B")};
    if (kind == "pole") return PoleTerm{real("t"), mat("G")};
    if (kind == "acbox") return AcBoxTerm{real("a"), real("b"), mat("R")};
    if (kind == "sqrt") return SqrtTerm{mat("G")};
    throw ParseError(child(path, "kind") + ": unknown term kind '" + kind + "'");
}

NevanlinnaModel model_from_json(const json& doc, const std::string& path) {
    const json& version = require(doc, "schema_version", path);
    if (!version.is_string() || version.get<std::string>() != "1") {
        throw ParseError(child(path, "schema_version") + ": expected \"1\"");
    }
    std::string name = "model";
    if (auto it = doc.find("name"); it != doc.end()) {
        if (!it->is_string()) throw ParseError(child(path, "name") + ": expected a string");
        name = it->get<std::string>();
    }
    const json& dim_v = require(doc, "dim", path);
    if (!dim_v.is_number_integer() || dim_v.get<long long>() < 1) {
        throw ParseError(child(path, "dim") + ": expected a positive integer");
    }
    const int dim = dim_v.get<int>();
    const json& terms_v = require(doc, "terms", path);
    if (!terms_v.is_array()) throw ParseError(child(path, "terms") + ": expected an array");
    std::vector<HerglotzTerm> terms;
    for (std::size_t k = 0; k < terms_v.size(); ++k) {
        terms.push_back(read_term(terms_v[k], dim, child(path, "terms") + "[" + std::to_string(k) + "]"));
    }
    NevanlinnaModel model(dim, std::move(terms), name);
    const auto issues = model.validate();
    if (!issues.empty()) {
        std::string msg = (path.empty() ? std::string("model") : path) + " '" + name + "': " + issues.front();
        for (std::size_t k = 1; k < issues.size(); ++k) msg += "; " + issues[k];
        throw ValidationError(msg);
    }
    return model;
}

ordered_json model_to_json(const NevanlinnaModel& model) {
    ordered_json doc;
    doc["schema_version"] = "1";
    doc["name"] = model.name();
    doc["dim"] = model.dim();
    ordered_json terms = ordered_json::array();
    for (const auto& term : model.terms()) {
        ordered_json t;
        t["kind"] = term_kind(term);
        if (const auto* c = std::get_if<ConstantTerm>(&term)) {
            t["C"] = write_matrix(c->C);
        } else if (const auto* c = std::get_if<AffineTerm>(&term)) {
            t["A"] = write_matrix(c->A);
            t["B"] = write_matrix(c->B);
        } else if (const auto* c = std::get_if<PoleTerm>(&term)) {
            t["t"] = c->t;
            t["G"] = write_matrix(c->G);
        } else if (const auto* c = std::get_if<AcBoxTerm>(&term)) {
            t["a"] = c->a;
            t["b"] = c->b;
            t["R"] = write_matrix(c->R);
        } else if (const auto* c = std::get_if<SqrtTerm>(&term)) {
            t["G"] = write_matrix(c->G);
        }
        terms.push_back(std::move(t));
    }
    doc["terms"] = std::move(terms);
    return doc;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("error while reading '" + path.string() + "'");
    return ss.str();
}

template <class F>
auto with_path(const std::string& path, F&& f) {
    try {
        return f();
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
    } catch (const DimensionError& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

}  // namespace

NevanlinnaModel parse_model(std::string_view text) { return model_from_json(parse_json(text, "model"), ""); }

NevanlinnaModel load_model(const std::filesystem::path& path) { return parse_model(read_file(path)); }

std::string serialize_model(const NevanlinnaModel& model) { return model_to_json(model).dump(2) + "\n"; }

ParameterDocument parse_parameter(std::string_view text, int dim) {
    const json doc = parse_json(text, "parameter");
    if (!doc.is_object() || doc.size() != 1) {
        throw ParseError("parameter: expected an object with exactly one of theta, relation, dissipative, coupled");
    }
    if (auto it = doc.find("theta"); it != doc.end()) {
        const json& basis_v = require(*it, "op_basis", "theta");
        ComplexMatrix basis;
        if (basis_v.is_string()) {
            if (basis_v.get<std::string>() != "full") {
                throw ParseError("theta.op_basis: expected a matrix or \"full\"");
            }
            basis = ComplexMatrix::Identity(dim, dim);
        } else {
            basis = read_matrix(basis_v, "theta.op_basis");
            if (basis.rows() == 0) basis.resize(dim, 0);
        }
        ComplexMatrix theta_op = read_matrix(require(*it, "theta_op", "theta"), "theta.theta_op");
        if (theta_op.rows() == 0) theta_op.resize(0, 0);
        return with_path("theta", [&] { return ParameterDocument(SelfAdjointParameter(dim, basis, theta_op)); });
    }
    if (auto it = doc.find("relation"); it != doc.end()) {
        const json& rank = require(*it, "op_rank", "relation");
        if (!rank.is_number_integer()) throw ParseError("relation.op_rank: expected an integer");
        if (rank.get<long long>() != 0) throw ValidationError("relation.op_rank: only 0 is supported");
        return SelfAdjointParameter::relation(dim);
    }
    if (auto it = doc.find("dissipative"); it != doc.end()) {
        ComplexMatrix d = read_matrix(require(*it, "D", "dissipative"), "dissipative.D");
        expect_square(d, dim, "dissipative.D");
        return with_path("dissipative",
                         [&] { return ParameterDocument(DissipativeParameter(d, kDefaultRankTol, 1e-10)); });
    }
    if (auto it = doc.find("coupled"); it != doc.end()) {
        NevanlinnaModel g = model_from_json(require(*it, "model_g", "coupled"), "coupled.model_g");
        if (g.dim() != dim) {
            throw ValidationError("coupled.model_g: dimension " + std::to_string(g.dim()) +
                                  " does not match model dimension " + std::to_string(dim));
        }
        return CoupledParameter{std::move(g)};
    }
    throw ParseError("parameter: expected one of theta, relation, dissipative, coupled");
}

ParameterDocument load_parameter(const std::filesystem::path& path, int dim) {
    return parse_parameter(read_file(path), dim);
}

std::string format_double(double value) {
    if (value == 0.0) return "0";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) return "nan";
    return std::string(buf, ptr);
}

std::string format_matrix(const ComplexMatrix& m) {
    std::string out = "[";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        if (i) out += ",";
        out += "[";
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out += ",";
            out += "[" + format_double(m(i, j).real()) + "," + format_double(m(i, j).imag()) + "]";
        }
        out += "]";
    }
    return out + "]";
}

namespace {

class CsvRow {
public:
    explicit CsvRow(std::ostream& out) : out_(out) {}
    CsvRow& operator<<(double v) { return cell(format_double(v)); }
    CsvRow& operator<<(int v) { return cell(std::to_string(v)); }
    CsvRow& operator<<(Complex v) { return *this << v.real() << v.imag(); }
    CsvRow& empty(int n) {
        for (int k = 0; k < n; ++k) cell("");
        return *this;
    }
    CsvRow& cell(const std::string& text) {
        if (!first_) out_ << ',';
        out_ << text;
        first_ = false;
        return *this;
    }
    void end() { out_ << '\n'; }

private:
    std::ostream& out_;
    bool first_ = true;
};

int status_flag(PointStatus s) {
    switch (s) {
        case PointStatus::Ok:
            return 0;
        case PointStatus::Skipped:
            return 1;
        case PointStatus::Failed:
            return 2;
    }
    return 2;
}

}  // namespace

void write_sweep_csv(std::span<const SelfAdjointRecord> records, std::ostream& out) {
    out << "lambda,rank,det_re,det_im,ssf,residual_bk,residual_unitarity,skipped\n";
    for (const auto& r : records) {
        CsvRow row(out);
        row << r.lambda;
        if (r.status == PointStatus::Ok) {
            row << r.rank << r.det << r.ssf << r.residual_bk << r.unitarity;
        } else {
            row.empty(6);
        }
        row << status_flag(r.status);
        row.end();
    }
}

void write_sweep_csv(std::span<const DissipativeRecord> records, std::ostream& out) {
    out << "lambda,rank_m,rank_d,det_sd_re,det_sd_im,det_slp_re,det_slp_im,eta,xi_dilation,"
           "residual_bk,residual_bk_dual,residual_unitarity,residual_adamyan_arov,skipped\n";
    for (const auto& r : records) {
        CsvRow row(out);
        row << r.lambda;
        if (r.status == PointStatus::Ok) {
            row << r.rank_m << r.rank_d << r.det_sd << r.det_slp << r.eta << r.xi_dilation << r.residual_bk
                << r.residual_bk_dual << r.unitarity << r.residual_adamyan_arov;
        } else {
            row.empty(12);
        }
        row << status_flag(r.status);
        row.end();
    }
}

void write_sweep_csv(std::span<const CoupledRecord> records, std::ostream& out) {
    out << "lambda,rank_h,rank_g,det_sh_re,det_sh_im,det_sg_re,det_sg_im,xi,"
           "residual_bk,residual_bk_dual,residual_unitarity,skipped\n";
    for (const auto& r : records) {
        CsvRow row(out);
        row << r.lambda;
        if (r.status == PointStatus::Ok) {
            row << r.rank_h << r.rank_g << r.det_sh << r.det_sg << r.xi << r.residual_bk << r.residual_bk_dual
                << r.unitarity;
        } else {
            row.empty(10);
        }
        row << status_flag(r.status);
        row.end();
    }
}

template <class Record>
void write_sweep_csv(std::span<const Record> records, const std::filesystem::path& destination) {
    std::ofstream out(destination, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + destination.string() + "' for writing");
    write_sweep_csv(records, static_cast<std::ostream&>(out));
    out.flush();
    if (!out) throw IoError("error while writing '" + destination.string() + "'");
}

template void write_sweep_csv<SelfAdjointRecord>(std::span<const SelfAdjointRecord>, const std::filesystem::path&);
template void write_sweep_csv<DissipativeRecord>(std::span<const DissipativeRecord>, const std::filesystem::path&);
template void write_sweep_csv<CoupledRecord>(std::span<const CoupledRecord>, const std::filesystem::path&);

}  // namespace krein
