#include "lmcast/matrix_market.hpp"

#include <cerrno>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace lmcast::mm {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

bool parse_u64(const std::string& tok, std::uint64_t& out) {
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
    return ec == std::errc{} && p == tok.data() + tok.size();
}

bool is_number(const std::string& tok, bool integer_only) {
    if (tok.empty()) return false;
    if (integer_only) {
        std::int64_t v;
        auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        return ec == std::errc{} && p == tok.data() + tok.size();
    }
    char* end = nullptr;
    errno = 0;
    std::strtod(tok.c_str(), &end);
    return end == tok.c_str() + tok.size();
}

}  // namespace

MatrixInfo parse_matrix_market(ByteView text) {
    MatrixInfo info;
    info.payload.assign(text.begin(), text.end());

    std::istringstream in(std::string(text.begin(), text.end()));
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(in, line))
        throw NotMatrixMarket("empty input");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("%%MatrixMarket", 0) != 0)
        throw NotMatrixMarket("missing %%MatrixMarket banner");

    auto banner = split_ws(line);
    if (banner.size() < 5 || banner[1] != "matrix")
        throw NotMatrixMarket("banner is not a matrix header");

    const std::string& fmt = banner[2];
    if (fmt == "coordinate") info.format = Format::Coordinate;
    else if (fmt == "array") info.format = Format::Array;
    else throw Unsupported("format: " + fmt);

    const std::string& field = banner[3];
    if (field == "real") info.field = Field::Real;
    else if (field == "integer") info.field = Field::Integer;
    else if (field == "pattern") info.field = Field::Pattern;
    else throw Unsupported(field);

    const std::string& sym = banner[4];
    if (sym == "general") info.symmetry = Symmetry::General;
    else if (sym == "symmetric") info.symmetry = Symmetry::Symmetric;
    else throw Unsupported("symmetry: " + sym);

    if (info.format == Format::Array && info.field == Field::Pattern)
        throw Unsupported("array format cannot carry a pattern field");

    // Comments, then the size line.
    std::vector<std::string> size_toks;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty() && line[0] == '%') continue;
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        size_toks = split_ws(line);
        break;
    }
    if (size_toks.empty()) throw Malformed("missing size line", line_no);

    std::uint64_t expected_entries = 0;
    if (info.format == Format::Coordinate) {
        if (size_toks.size() != 3 || !parse_u64(size_toks[0], info.rows) ||
            !parse_u64(size_toks[1], info.cols) ||
            !parse_u64(size_toks[2], info.nnz))
            throw Malformed("bad coordinate size line", line_no);
        expected_entries = info.nnz;
    } else {
        if (size_toks.size() != 2 || !parse_u64(size_toks[0], info.rows) ||
            !parse_u64(size_toks[1], info.cols))
            throw Malformed("bad array size line", line_no);
        expected_entries =
            info.symmetry == Symmetry::Symmetric
                ? info.rows * (info.rows + 1) / 2
                : info.rows * info.cols;
        info.nnz = expected_entries;
    }
    if (info.rows < 1 || info.cols < 1)
        throw Malformed("matrix dimensions must be >= 1", line_no);

    std::uint64_t entries = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        auto toks = split_ws(line);

        if (info.format == Format::Coordinate) {
            const std::size_t want = info.field == Field::Pattern ? 2 : 3;
            if (toks.size() != want)
                throw Malformed("wrong entry arity", line_no);
            std::uint64_t r, c;
            if (!parse_u64(toks[0], r) || !parse_u64(toks[1], c))
                throw Malformed("non-numeric entry", line_no);
            if (r < 1 || r > info.rows || c < 1 || c > info.cols)
                throw Malformed("entry index out of bounds", line_no);
            if (want == 3 &&
                !is_number(toks[2], info.field == Field::Integer))
                throw Malformed("non-numeric entry", line_no);
        } else {
            if (toks.size() != 1 ||
                !is_number(toks[0], info.field == Field::Integer))
                throw Malformed("non-numeric entry", line_no);
        }
        ++entries;
    }
    if (entries != expected_entries)
        throw Malformed("entry count disagrees with size line", line_no);

    return info;
}

MatrixInfo load_matrix_market(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    Bytes bytes((std::istreambuf_iterator<char>(f)),
                std::istreambuf_iterator<char>());
    MatrixInfo info = parse_matrix_market(bytes);
    info.path = path;
    return info;
}

}  // namespace lmcast::mm
