#pragma once

#include <filesystem>
#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "effstiff/assembly.hpp"
#include "effstiff/leverage.hpp"
#include "effstiff/sampler.hpp"
#include "effstiff/solver.hpp"
#include "effstiff/sparse.hpp"

namespace effstiff {

// Shortest text that round-trips: 17 significant digits.
std::string format_real(double v);

// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

// FEAS v1:
//   feas 1 <n> <m> <r> <d>
//   nullrow <d reals>                      (n lines)
//   elem <id> <n_e> <n_e node indices>     (per element)
//   <n_e reals>                            (n_e rows of the full matrix)
// '#' starts a comment. Indices are 0-based.
std::string feas_string(const Assembly& a, std::span<const std::string> comments = {});
Assembly parse_feas(std::string_view text);
Assembly load_feas(const std::filesystem::path& path);

// Matrix Market coordinate real symmetric, lower triangle, 1-based.
std::string matrix_market_string(const SparseSymmetric& a, std::string_view comment = {});
SparseSymmetric parse_matrix_market(std::string_view text);

// element_id,tau,method,radius
std::string leverage_csv(const LeverageTable& t);
LeverageTable parse_leverage_csv(std::string_view text);

// iter,relres
std::string residual_csv(const SolveReport& r);
// i,J_i
std::string audit_csv(const Draws& d);
// node_id,x,y[,z]
std::string coordinates_csv(const DenseMatrix& coords);

// One value per line; blank lines and '#' comments ignored.
Vector parse_vector(std::string_view text);
std::string vector_text(std::span<const double> v);

}  // namespace effstiff
