#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <variant>

#include "krein/coupled.hpp"
#include "krein/dissipative.hpp"
#include "krein/nevanlinna.hpp"
#include "krein/selfadjoint.hpp"
#include "krein/sweep.hpp"

namespace krein {

// Model documents are JSON objects
//
//   {"schema_version": "1", "name": ..., "dim": n,
//    "terms": [{"kind": "constant", "C": M}, {"kind": "affine", "A": M, "B": M},
//              {"kind": "pole", "t": x, "G": M}, {"kind": "acbox", "a": x, "b": x, "R": M},
//              {"kind": "sqrt", "G": M}]}
//
// where a matrix M is a row-major nested array of complex entries [re, im]
// (a bare real number is accepted as [re, 0] on input).
//
// Parse failures throw ParseError, invariant violations ValidationError; both
// carry the JSON path of the offending field.
NevanlinnaModel parse_model(std::string_view text);
NevanlinnaModel load_model(const std::filesystem::path& path);
std::string serialize_model(const NevanlinnaModel& model);

// Parameter documents, one of
//   {"theta": {"op_basis": M | "full", "theta_op": M}}
//   {"relation": {"op_rank": 0}}
//   {"dissipative": {"D": M}}
//   {"coupled": {"model_g": <model document>}}
struct CoupledParameter {
    NevanlinnaModel model_g;
};

using ParameterDocument = std::variant<SelfAdjointParameter, DissipativeParameter, CoupledParameter>;

ParameterDocument parse_parameter(std::string_view text, int dim);
ParameterDocument load_parameter(const std::filesystem::path& path, int dim);

// Shortest decimal that round-trips; "." separator regardless of locale and
// -0 printed as 0.
std::string format_double(double value);

// Matrix in model-document notation, e.g. [[[0,2]]].
std::string format_matrix(const ComplexMatrix& m);

// CSV with header row, "," separator and "\n" line ends, rows in grid order.
// Skipped or failed points keep lambda, leave every numeric field empty and
// set skipped=1.
void write_sweep_csv(std::span<const SelfAdjointRecord> records, std::ostream& out);
void write_sweep_csv(std::span<const DissipativeRecord> records, std::ostream& out);
void write_sweep_csv(std::span<const CoupledRecord> records, std::ostream& out);

// File variants; throw IoError when the destination cannot be written.
template <class Record>
void write_sweep_csv(std::span<const Record> records, const std::filesystem::path& destination);

}  // namespace krein
