#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "lmcast/common.hpp"

// Matrix Market exchange format parser (banner, comments, size line,
// entries). The payload the toolkit transmits is the FILE bytes, kept
// byte-exact; parsing validates corpus integrity and reports sizes.
namespace lmcast::mm {

enum class Format { Coordinate, Array };
enum class Field { Real, Integer, Pattern };
enum class Symmetry { General, Symmetric };

struct MatrixInfo {
    std::string path;
    Format format = Format::Coordinate;
    Field field = Field::Real;
    Symmetry symmetry = Symmetry::General;
    std::uint64_t rows = 0;
    std::uint64_t cols = 0;
    std::uint64_t nnz = 0;   // stored entries (logical count doubles for symmetric)
    Bytes payload;           // exactly the input bytes
};

class NotMatrixMarket : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class Unsupported : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class Malformed : public std::runtime_error {
public:
    Malformed(const std::string& what, std::size_t line_no)
        : std::runtime_error(what + " (line " + std::to_string(line_no) + ")"),
          line(line_no) {}
    std::size_t line;
};

MatrixInfo parse_matrix_market(ByteView text);
MatrixInfo load_matrix_market(const std::string& path);

}  // namespace lmcast::mm
