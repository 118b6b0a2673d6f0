#include "prony/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "prony/error.hpp"

namespace prony::io {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

double parse_double(const std::string& s, int line_no) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError("csv line " + std::to_string(line_no) + ": '" + s + "' is not a number");
}

int parse_int(const std::string& s, int line_no) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(s, &used);
        if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError("csv line " + std::to_string(line_no) + ": '" + s + "' is not an integer");
}

// Reads the next non-comment, non-blank line.
bool next_line(std::istream& is, std::string& line, int& line_no) {
    while (std::getline(is, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        line = t;
        return true;
    }
    return false;
}

void expect_header(const std::vector<std::string>& cols, const std::string& prefix, int d, const char* what) {
    for (int l = 0; l < d; ++l)
        if (cols[static_cast<std::size_t>(l)] != prefix + std::to_string(l + 1))
            throw ConfigError(std::string(what) + ": unexpected header column '" + cols[static_cast<std::size_t>(l)] + "'");
    if (cols[static_cast<std::size_t>(d)] != "c_re" && cols[static_cast<std::size_t>(d)] != "re")
        throw ConfigError(std::string(what) + ": unexpected header column '" + cols[static_cast<std::size_t>(d)] + "'");
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_params(std::ostream& os, const ParameterSet& params) {
    const int d = params.dim();
    for (int l = 0; l < d; ++l) os << 't' << l + 1 << ',';
    os << "c_re,c_im\n";
    for (int j = 0; j < params.order(); ++j) {
        for (int l = 0; l < d; ++l) os << format_double(params.locations(j, l)) << ',';
        os << format_double(params.coefficients(j).real()) << ',' << format_double(params.coefficients(j).imag()) << '\n';
    }
}

ParameterSet read_params(std::istream& is) {
    std::string line;
    int line_no = 0;
    if (!next_line(is, line, line_no)) throw ConfigError("parameter file: empty");
    const auto header = split(line, ',');
    if (header.size() < 3 || header[header.size() - 2] != "c_re" || header.back() != "c_im")
        throw ConfigError("parameter file: header must be t1,...,td,c_re,c_im");
    const int d = static_cast<int>(header.size()) - 2;
    expect_header(header, "t", d, "parameter file");

    std::vector<std::vector<double>> rows;
    while (next_line(is, line, line_no)) {
        const auto cols = split(line, ',');
        if (cols.size() != header.size())
            throw ConfigError("parameter file line " + std::to_string(line_no) + ": expected " +
                              std::to_string(header.size()) + " columns");
        std::vector<double> row;
        for (const auto& c : cols) row.push_back(parse_double(c, line_no));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ConfigError("parameter file: no sources");
    ParameterSet p(Eigen::MatrixXd(static_cast<Eigen::Index>(rows.size()), d),
                   Eigen::VectorXcd(static_cast<Eigen::Index>(rows.size())));
    for (std::size_t j = 0; j < rows.size(); ++j) {
        const auto r = static_cast<Eigen::Index>(j);
        for (int l = 0; l < d; ++l) p.locations(r, l) = rows[j][static_cast<std::size_t>(l)];
        p.coefficients(r) = cdouble(rows[j][static_cast<std::size_t>(d)], rows[j][static_cast<std::size_t>(d + 1)]);
    }
    p.validate();
    return p;
}

void write_samples(std::ostream& os, const SampleTable& table) {
    const int d = table.dim();
    for (int l = 0; l < d; ++l) os << 'k' << l + 1 << ',';
    os << "re,im\n";
    for (std::size_t i = 0; i < table.size(); ++i) {
        if (!table.present(i)) continue;
        const MultiIndex k = table.key(i);
        for (int v : k) os << v << ',';
        os << format_double(table.values()[i].real()) << ',' << format_double(table.values()[i].imag()) << '\n';
    }
}

SampleTable read_samples(std::istream& is) {
    std::string line;
    int line_no = 0;
    if (!next_line(is, line, line_no)) throw ConfigError("sample file: empty");
    const auto header = split(line, ',');
    if (header.size() < 3 || header[header.size() - 2] != "re" || header.back() != "im")
        throw ConfigError("sample file: header must be k1,...,kd,re,im");
    const int d = static_cast<int>(header.size()) - 2;
    expect_header(header, "k", d, "sample file");

    struct Row {
        MultiIndex k;
        cdouble v;
    };
    std::vector<Row> rows;
    int lo = 0;
    int hi = 0;
    while (next_line(is, line, line_no)) {
        const auto cols = split(line, ',');
        if (cols.size() != header.size())
            throw ConfigError("sample file line " + std::to_string(line_no) + ": expected " +
                              std::to_string(header.size()) + " columns");
        Row r;
        for (int l = 0; l < d; ++l) {
            r.k.push_back(parse_int(cols[static_cast<std::size_t>(l)], line_no));
            lo = std::min(lo, r.k.back());
            hi = std::max(hi, r.k.back());
        }
        r.v = cdouble(parse_double(cols[static_cast<std::size_t>(d)], line_no),
                      parse_double(cols[static_cast<std::size_t>(d + 1)], line_no));
        rows.push_back(std::move(r));
    }
    if (rows.empty()) throw ConfigError("sample file: no samples");
    const int n = std::max(-lo, hi - 1);
    if (hi > n + 1 || -lo > n)
        throw ConfigError("sample file: key range is not of the form {-n..n+1}");
    SampleTable table(d, n);
    for (const auto& r : rows) table.set(r.k, r.v);
    return table;
}

void write_image_csv(std::ostream& os, const ImageGrid& image) {
    if (image.d != 1 && image.d != 2) throw ConfigError("image csv: only d = 1 or 2 supported");
    const int rows = image.d == 1 ? 1 : image.P;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < image.P; ++c) {
            if (c) os << ',';
            os << format_double(image.pixels[static_cast<std::size_t>(r) * image.P + c]);
        }
        os << '\n';
    }
}

ImageGrid read_image_csv(std::istream& is) {
    std::string line;
    int line_no = 0;
    std::vector<std::vector<double>> rows;
    while (next_line(is, line, line_no)) {
        std::vector<double> row;
        for (const auto& c : split(line, ',')) row.push_back(parse_double(c, line_no));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ConfigError("image csv: empty");
    const int P = static_cast<int>(rows.front().size());
    for (const auto& r : rows)
        if (static_cast<int>(r.size()) != P) throw ConfigError("image csv: ragged rows");
    if (rows.size() == 1) {
        ImageGrid img(1, P);
        img.pixels = rows.front();
        return img;
    }
    if (static_cast<int>(rows.size()) != P) throw ConfigError("image csv: image must be square (P x P)");
    ImageGrid img(2, P);
    for (int r = 0; r < P; ++r)
        for (int c = 0; c < P; ++c) img.at(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    return img;
}

void write_pgm(std::ostream& os, const ImageGrid& image, const PgmOptions& opts) {
    if (image.d != 2) throw ConfigError("pgm: only 2-D images supported");
    if (opts.maxval < 1 || opts.maxval > 65535) throw ConfigError("pgm: maxval must lie in [1, 65535]");
    os << (opts.binary ? "P5" : "P2") << '\n' << image.P << ' ' << image.P << '\n' << opts.maxval << '\n';
    for (std::size_t i = 0; i < image.size(); ++i) {
        const double scaled = std::round((image.pixels[i] - opts.offset) * opts.scale);
        const int v = static_cast<int>(std::clamp(scaled, 0.0, static_cast<double>(opts.maxval)));
        if (opts.binary) {
            if (opts.maxval > 255) os.put(static_cast<char>((v >> 8) & 0xFF));
            os.put(static_cast<char>(v & 0xFF));
        } else {
            os << v << (((i + 1) % static_cast<std::size_t>(image.P)) == 0 ? '\n' : ' ');
        }
    }
}

namespace {

// PGM header token, skipping whitespace and '#' comments.
std::string pgm_token(std::istream& is) {
    std::string tok;
    int ch;
    while ((ch = is.get()) != EOF) {
        if (ch == '#') {
            while ((ch = is.get()) != EOF && ch != '\n') {
            }
            continue;
        }
        if (std::isspace(ch)) {
            if (!tok.empty()) break;
            continue;
        }
        tok.push_back(static_cast<char>(ch));
    }
    if (tok.empty()) throw ConfigError("pgm: truncated header");
    return tok;
}

}  // namespace

ImageGrid read_pgm(std::istream& is) {
    const std::string magic = pgm_token(is);
    if (magic != "P2" && magic != "P5") throw ConfigError("pgm: unsupported magic '" + magic + "'");
    const int w = parse_int(pgm_token(is), 0);
    const int h = parse_int(pgm_token(is), 0);
    const int maxval = parse_int(pgm_token(is), 0);
    if (w != h || w < 2) throw ConfigError("pgm: image must be square with at least 2 pixels per side");
    if (maxval < 1 || maxval > 65535) throw ConfigError("pgm: max value must lie in [1, 65535]");

    ImageGrid img(2, w);
    for (std::size_t i = 0; i < img.size(); ++i) {
        int v = 0;
        if (magic == "P2") {
            v = parse_int(pgm_token(is), 0);
        } else {
            const int hi = is.get();
            if (hi == EOF) throw ConfigError("pgm: truncated pixel data");
            v = hi;
            if (maxval > 255) {
                const int lo = is.get();
                if (lo == EOF) throw ConfigError("pgm: truncated pixel data");
                v = (hi << 8) | lo;
            }
        }
        if (v < 0 || v > maxval) throw ConfigError("pgm: pixel value exceeds the max-value field");
        img.pixels[i] = v;
    }
    return img;
}

ImageGrid read_image(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open image '" + path.string() + "'");
    if (path.extension() == ".pgm") return read_pgm(in);
    if (path.extension() == ".csv") return read_image_csv(in);
    throw ConfigError("unsupported image extension '" + path.extension().string() + "' (expected .pgm or .csv)");
}

void write_report(std::ostream& os, const ReconstructionResult& r) {
    os << "rank: " << r.rank << '\n';
    os << "residual: " << format_double(r.residual) << '\n';
    os << "min_gap: " << format_double(r.min_gap) << '\n';
    os << "offdiag_max: " << format_double(r.offdiag_max) << '\n';
    os << "cond_W: " << format_double(r.cond_W) << '\n';
    os << "retries: " << r.retries << '\n';
    os << "mu:";
    for (Eigen::Index l = 0; l < r.mu.size(); ++l)
        os << ' ' << format_double(r.mu(l).real()) << (r.mu(l).imag() < 0 ? "" : "+") << format_double(r.mu(l).imag())
           << 'i';
    os << '\n';
    os << "singular_values:";
    for (Eigen::Index i = 0; i < r.singular_values.size(); ++i) os << ' ' << format_double(r.singular_values(i));
    os << '\n';
    for (const auto& w : r.warnings) os << "warning: " << w << '\n';
}

void write_gap_map(std::ostream& os, const GapMap& map, const std::vector<std::string>& header_comments) {
    for (const auto& c : header_comments) os << "# " << c << '\n';
    os << "theta,phi,x,y,z,gap\n";
    for (int i = 0; i < map.n_theta; ++i) {
        const double th = map.theta[static_cast<std::size_t>(i)];
        for (int j = 0; j < map.n_phi; ++j) {
            const double ph = map.phi[static_cast<std::size_t>(j)];
            os << format_double(th) << ',' << format_double(ph) << ',' << format_double(std::sin(th) * std::cos(ph)) << ','
               << format_double(std::sin(th) * std::sin(ph)) << ',' << format_double(std::cos(th)) << ','
               << format_double(map.at(i, j)) << '\n';
        }
    }
}

}  // namespace prony::io
