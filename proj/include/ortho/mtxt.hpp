#pragma once

// "MTXT v1" plain-text matrix files.
//
//   line 1:  <rows> <cols> <real|complex>
//   then one line per row with <cols> whitespace-separated entries; a complex
//   entry is written as the pair "re im". Writers emit %.17g.

#include <filesystem>
#include <iosfwd>
#include <variant>

#include "ortho/matrix.hpp"

namespace ortho::mtxt {

using AnyMatrix = std::variant<Matrix<double>, Matrix<cplx>>;

void write(std::ostream& os, const Matrix<double>& m);
void write(std::ostream& os, const Matrix<cplx>& m);
void write_file(const std::filesystem::path& path, const AnyMatrix& m);

/// Throws IoError on malformed input.
AnyMatrix read(std::istream& is);
AnyMatrix read_file(const std::filesystem::path& path);

/// Reads a file and converts to the requested scalar type. Reading a complex
/// file as real throws IoError.
template <class T>
Matrix<T> read_as(const std::filesystem::path& path);

}  // namespace ortho::mtxt
