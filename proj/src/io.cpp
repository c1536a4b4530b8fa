#include "effstiff/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include "effstiff/errors.hpp"

namespace effstiff {

namespace {

// Splits text into lines with comments removed, keeping 1-based line numbers.
struct Line {
    std::size_t number;
    std::vector<std::string_view> tokens;
};

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        out.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return out;
}

std::vector<Line> tokenize(std::string_view text, char comment) {
    std::vector<Line> lines;
    std::size_t number = 0;
    for (std::string_view raw : split(text, '\n')) {
        ++number;
        if (const std::size_t c = raw.find(comment); c != std::string_view::npos) {
            raw = raw.substr(0, c);
        }
        Line line{number, {}};
        std::size_t i = 0;
        while (i < raw.size()) {
            while (i < raw.size() && std::isspace(static_cast<unsigned char>(raw[i]))) {
                ++i;
            }
            const std::size_t start = i;
            while (i < raw.size() && !std::isspace(static_cast<unsigned char>(raw[i]))) {
                ++i;
            }
            if (i > start) {
                line.tokens.push_back(raw.substr(start, i - start));
            }
        }
        if (!line.tokens.empty()) {
            lines.push_back(std::move(line));
        }
    }
    return lines;
}

[[noreturn]] void fail(std::string_view what, std::size_t line) {
    throw ParseError(std::string(what) + (line ? " (line " + std::to_string(line) + ")" : ""));
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

double to_real(std::string_view s, std::size_t line) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') {
        s.remove_prefix(1);
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
        fail("expected a finite real, got '" + std::string(s) + "'", line);
    }
    return v;
}

std::size_t to_index(std::string_view s, std::size_t line) {
    s = trim(s);
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        fail("expected a nonnegative integer, got '" + std::string(s) + "'", line);
    }
    return v;
}

void append_scientific(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    out += buf;
}

}  // namespace

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error("cannot open " + tmp.string() + " for writing");
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            throw Error("write to " + tmp.string() + " failed");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Error("cannot move output into place at " + path.string());
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string feas_string(const Assembly& a, std::span<const std::string> comments) {
    std::string out;
    for (const auto& c : comments) {
        out += "# " + c + "\n";
    }
    out += "feas 1 " + std::to_string(a.n()) + " " + std::to_string(a.m()) + " " +
           std::to_string(a.r()) + " " + std::to_string(a.d()) + "\n";
    const DenseMatrix& nb = a.null_basis();
    for (std::size_t i = 0; i < a.n(); ++i) {
        out += "nullrow";
        for (std::size_t j = 0; j < a.d(); ++j) {
            out += ' ';
            append_scientific(out, nb(i, j));
        }
        out += '\n';
    }
    for (const auto& el : a.elements()) {
        out += "elem " + std::to_string(el.id) + " " + std::to_string(el.size());
        for (std::size_t v : el.nodes) {
            out += " " + std::to_string(v);
        }
        out += '\n';
        for (std::size_t i = 0; i < el.size(); ++i) {
            for (std::size_t j = 0; j < el.size(); ++j) {
                if (j > 0) {
                    out += ' ';
                }
                append_scientific(out, el.k_tilde(i, j));
            }
            out += '\n';
        }
    }
    return out;
}

Assembly parse_feas(std::string_view text) {
    const std::vector<Line> lines = tokenize(text, '#');
    std::size_t at = 0;
    auto next = [&](const char* what) -> const Line& {
        if (at >= lines.size()) {
            fail(std::string("unexpected end of file, expected ") + what, 0);
        }
        return lines[at++];
    };

    const Line& header = next("header");
    if (header.tokens.size() != 6 || header.tokens[0] != "feas") {
        fail("header must read 'feas 1 <n> <m> <r> <d>'", header.number);
    }
    if (header.tokens[1] != "1") {
        fail("unsupported FEAS version '" + std::string(header.tokens[1]) + "'", header.number);
    }
    const std::size_t n = to_index(header.tokens[2], header.number);
    const std::size_t m = to_index(header.tokens[3], header.number);
    const std::size_t r = to_index(header.tokens[4], header.number);
    const std::size_t d = to_index(header.tokens[5], header.number);
    if (n == 0 || r == 0 || d > n) {
        fail("header values out of range", header.number);
    }

    DenseMatrix nb(n, d);
    for (std::size_t i = 0; i < n; ++i) {
        const Line& row = next("nullrow");
        if (row.tokens.empty() || row.tokens[0] != "nullrow" || row.tokens.size() != d + 1) {
            fail("expected 'nullrow' followed by " + std::to_string(d) + " reals", row.number);
        }
        for (std::size_t j = 0; j < d; ++j) {
            nb(i, j) = to_real(row.tokens[j + 1], row.number);
        }
    }

    std::vector<ElementMatrix> els;
    els.reserve(m);
    for (std::size_t e = 0; e < m; ++e) {
        const Line& head = next("elem");
        if (head.tokens.size() < 3 || head.tokens[0] != "elem") {
            fail("expected 'elem <id> <n_e> <nodes...>'", head.number);
        }
        ElementMatrix el;
        el.id = to_index(head.tokens[1], head.number);
        const std::size_t ne = to_index(head.tokens[2], head.number);
        if (ne == 0 || head.tokens.size() != 3 + ne) {
            fail("element node count does not match its index list", head.number);
        }
        for (std::size_t k = 0; k < ne; ++k) {
            el.nodes.push_back(to_index(head.tokens[3 + k], head.number));
        }
        DenseMatrix full(ne, ne);
        for (std::size_t i = 0; i < ne; ++i) {
            const Line& row = next("element matrix row");
            if (row.tokens.size() != ne) {
                fail("element matrix row must hold " + std::to_string(ne) + " reals",
                     row.number);
            }
            for (std::size_t j = 0; j < ne; ++j) {
                full(i, j) = to_real(row.tokens[j], row.number);
            }
        }
        double scale = 0.0;
        for (double v : full.data()) {
            scale = std::max(scale, std::abs(v));
        }
        for (std::size_t i = 0; i < ne; ++i) {
            for (std::size_t j = 0; j < i; ++j) {
                if (std::abs(full(i, j) - full(j, i)) > 1e-12 * scale) {
                    fail("element " + std::to_string(el.id) + " matrix is not symmetric",
                         head.number);
                }
            }
        }
        el.k_tilde = SymmetricDense::from_dense(full);
        els.push_back(std::move(el));
    }
    if (at != lines.size()) {
        fail("trailing content after the last element", lines[at].number);
    }
    return Assembly(n, std::move(els), std::move(nb), r);
}

Assembly load_feas(const std::filesystem::path& path) { return parse_feas(read_file(path)); }

std::string matrix_market_string(const SparseSymmetric& a, std::string_view comment) {
    std::string out = "%%MatrixMarket matrix coordinate real symmetric\n";
    if (!comment.empty()) {
        out += "% ";
        out += comment;
        out += '\n';
    }
    out += std::to_string(a.order()) + " " + std::to_string(a.order()) + " " +
           std::to_string(a.nnz()) + "\n";
    const auto cp = a.col_ptr();
    const auto ri = a.row_idx();
    const auto vals = a.values();
    for (std::size_t j = 0; j < a.order(); ++j) {
        for (std::size_t q = cp[j]; q < cp[j + 1]; ++q) {
            out += std::to_string(ri[q] + 1) + " " + std::to_string(j + 1) + " " +
                   format_real(vals[q]) + "\n";
        }
    }
    return out;
}

SparseSymmetric parse_matrix_market(std::string_view text) {
    const std::size_t eol = text.find('\n');
    const std::string_view banner = trim(text.substr(0, eol));
    const std::vector<Line> head = tokenize(banner, '\0');
    if (head.empty() || head[0].tokens.size() != 5 || head[0].tokens[0] != "%%MatrixMarket" ||
        head[0].tokens[1] != "matrix" || head[0].tokens[2] != "coordinate" ||
        head[0].tokens[3] != "real" || head[0].tokens[4] != "symmetric") {
        fail("expected '%%MatrixMarket matrix coordinate real symmetric'", 1);
    }
    const std::vector<Line> lines =
        tokenize(eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1), '%');
    if (lines.empty()) {
        fail("missing size line", 0);
    }
    const Line& size = lines[0];
    if (size.tokens.size() != 3) {
        fail("size line must hold rows, cols, entries", size.number + 1);
    }
    const std::size_t rows = to_index(size.tokens[0], size.number + 1);
    const std::size_t cols = to_index(size.tokens[1], size.number + 1);
    const std::size_t nnz = to_index(size.tokens[2], size.number + 1);
    if (rows != cols || rows == 0) {
        fail("matrix must be square and nonempty", size.number + 1);
    }
    if (lines.size() != nnz + 1) {
        fail("expected " + std::to_string(nnz) + " entries, found " +
                 std::to_string(lines.size() - 1),
             0);
    }
    std::vector<Triplet> t;
    t.reserve(nnz);
    for (std::size_t k = 1; k < lines.size(); ++k) {
        const Line& l = lines[k];
        if (l.tokens.size() != 3) {
            fail("entry must hold row, col, value", l.number + 1);
        }
        const std::size_t i = to_index(l.tokens[0], l.number + 1);
        const std::size_t j = to_index(l.tokens[1], l.number + 1);
        if (i == 0 || j == 0 || i > rows || j > rows) {
            fail("entry index out of range", l.number + 1);
        }
        t.push_back({i - 1, j - 1, to_real(l.tokens[2], l.number + 1)});
    }
    return SparseSymmetric::from_triplets(rows, t);
}

std::string leverage_csv(const LeverageTable& t) {
    std::string out = "element_id,tau,method,radius\n";
    for (const auto& r : t.records) {
        out += std::to_string(r.element_id) + "," + format_real(r.tau) + "," +
               std::string(to_string(r.method)) + "," +
               (r.radius ? std::to_string(*r.radius) : std::string()) + "\n";
    }
    return out;
}

LeverageTable parse_leverage_csv(std::string_view text) {
    LeverageTable t;
    std::size_t number = 0;
    bool header = false;
    for (std::string_view raw : split(text, '\n')) {
        ++number;
        raw = trim(raw);
        if (raw.empty()) {
            continue;
        }
        if (!header) {
            if (raw != "element_id,tau,method,radius") {
                fail("leverage CSV header must be 'element_id,tau,method,radius'", number);
            }
            header = true;
            continue;
        }
        const auto f = split(raw, ',');
        if (f.size() != 4) {
            fail("leverage row must have 4 fields", number);
        }
        LeverageRecord r;
        r.element_id = to_index(f[0], number);
        r.tau = to_real(f[1], number);
        if (!(r.tau > 0.0) || r.tau > 1.0 + 1e-10) {
            fail("leverage outside (0, 1]", number);
        }
        try {
            r.method = parse_leverage_method(trim(f[2]));
        } catch (const DomainError& e) {
            fail(e.what(), number);
        }
        if (!trim(f[3]).empty()) {
            r.radius = to_index(f[3], number);
        }
        t.total += r.tau;
        t.records.push_back(r);
    }
    if (!header) {
        fail("empty leverage CSV", 0);
    }
    return t;
}

std::string residual_csv(const SolveReport& r) {
    std::string out = "iter,relres\n";
    for (std::size_t i = 0; i < r.residual_history.size(); ++i) {
        out += std::to_string(i) + "," + format_real(r.residual_history[i]) + "\n";
    }
    return out;
}

std::string audit_csv(const Draws& d) {
    std::string out = "i,J_i\n";
    for (std::size_t i = 0; i < d.sequence.size(); ++i) {
        out += std::to_string(i) + "," + std::to_string(d.sequence[i]) + "\n";
    }
    return out;
}

std::string coordinates_csv(const DenseMatrix& coords) {
    std::string out = coords.cols() >= 3 ? "node_id,x,y,z\n" : "node_id,x,y\n";
    for (std::size_t i = 0; i < coords.rows(); ++i) {
        out += std::to_string(i);
        for (std::size_t c = 0; c < coords.cols(); ++c) {
            out += "," + format_real(coords(i, c));
        }
        out += "\n";
    }
    return out;
}

Vector parse_vector(std::string_view text) {
    Vector v;
    for (const Line& l : tokenize(text, '#')) {
        if (l.tokens.size() != 1) {
            fail("expected one value per line", l.number);
        }
        v.push_back(to_real(l.tokens[0], l.number));
    }
    return v;
}

std::string vector_text(std::span<const double> v) {
    std::string out;
    for (double x : v) {
        out += format_real(x) + "\n";
    }
    return out;
}

}  // namespace effstiff
