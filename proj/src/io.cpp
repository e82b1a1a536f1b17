#include "tyc/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "tyc/errors.hpp"

namespace tyc {

std::string fmt_num(double v) {
    // %.15g never emits a locale decimal separator other than '.' here:
    // the process stays in the "C" locale (no setlocale call anywhere).
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os)
        throw ConfigError("cannot open for writing: " + path);
    return os;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream is(path);
    if (!is)
        throw ConfigError("cannot open for reading: " + path);
    return is;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& s, const std::string& path, size_t line_no) {
    try {
        size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size())
            throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(path + ":" + std::to_string(line_no) +
                          ": cannot parse number '" + s + "'");
    }
}

} // namespace

void write_field_csv(const std::string& path, const Field& u, const Grid& g) {
    if (static_cast<int>(u.size()) != g.cell_count())
        throw ConfigError("write_field_csv: field does not match the grid");
    auto os = open_out(path);
    os << (g.dim == 2 ? "i,j,value\n" : "i,value\n");
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) {
            os << i;
            if (g.dim == 2)
                os << ',' << j;
            os << ',' << fmt_num(u[static_cast<size_t>(g.index(i, j))]) << '\n';
        }
}

Field read_field_csv(const std::string& path, const Grid& g) {
    auto is = open_in(path);
    std::string line;
    if (!std::getline(is, line))
        throw ConfigError(path + ": empty file");
    Field u(g, 0.0);
    size_t line_no = 1, rows = 0;
    const size_t value_col = g.dim == 2 ? 2 : 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty())
            continue;
        auto cols = split_csv(line);
        if (cols.size() != value_col + 1)
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected " +
                              std::to_string(value_col + 1) + " columns");
        if (rows >= u.size())
            throw ConfigError(path + ": more rows than grid cells");
        u[rows++] = parse_double(cols[value_col], path, line_no);
    }
    if (rows != u.size())
        throw ConfigError(path + ": has " + std::to_string(rows) + " rows but the grid has " +
                          std::to_string(u.size()) + " cells");
    return u;
}

void write_state_csv(const std::string& path, const SimState& st, const Grid& g) {
    auto os = open_out(path);
    os << (g.dim == 2 ? "i,j,f,m,s,r\n" : "i,f,m,s,r\n");
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) {
            const auto c = static_cast<size_t>(g.index(i, j));
            os << i;
            if (g.dim == 2)
                os << ',' << j;
            os << ',' << fmt_num(st.f[c]) << ',' << fmt_num(st.m[c]) << ','
               << fmt_num(st.s[c]) << ',' << fmt_num(st.r[c]) << '\n';
        }
}

SimState read_state_csv(const std::string& path, const Grid& g) {
    auto is = open_in(path);
    std::string line;
    if (!std::getline(is, line))
        throw ConfigError(path + ": empty file");
    SimState st(g);
    size_t line_no = 1, rows = 0;
    const size_t first_col = g.dim == 2 ? 2 : 1;
    const size_t n = static_cast<size_t>(g.cell_count());
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty())
            continue;
        auto cols = split_csv(line);
        if (cols.size() != first_col + 4)
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected " +
                              std::to_string(first_col + 4) + " columns");
        if (rows >= n)
            throw ConfigError(path + ": more rows than grid cells");
        st.f[rows] = parse_double(cols[first_col + 0], path, line_no);
        st.m[rows] = parse_double(cols[first_col + 1], path, line_no);
        st.s[rows] = parse_double(cols[first_col + 2], path, line_no);
        st.r[rows] = parse_double(cols[first_col + 3], path, line_no);
        ++rows;
    }
    if (rows != n)
        throw ConfigError(path + ": has " + std::to_string(rows) + " rows but the grid has " +
                          std::to_string(n) + " cells");
    return st;
}

void write_timeseries_csv(const std::string& path, const std::vector<NormSample>& series) {
    auto os = open_out(path);
    os << "t,l2_f,l2_m,l2_s,l2_r,min_f,max_f,min_m,max_m,min_s,max_s,min_r,max_r\n";
    for (const auto& s : series) {
        os << fmt_num(s.t);
        for (int k = 0; k < 4; ++k)
            os << ',' << fmt_num(s.l2[static_cast<size_t>(k)]);
        for (int k = 0; k < 4; ++k)
            os << ',' << fmt_num(s.mn[static_cast<size_t>(k)]) << ','
               << fmt_num(s.mx[static_cast<size_t>(k)]);
        os << '\n';
    }
}

void write_bifurcation_csv(const std::string& path,
                           const std::vector<BifurcationRecord>& records) {
    auto os = open_out(path);
    os << "beta,branch_count,f_plus,m_plus,f_minus,m_minus,"
          "asym_l2_f,asym_l2_m,asym_l2_s,asym_l2_r,f_mean,m_mean,converged\n";
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const auto& rec : records) {
        double fp = nan, mp = nan, fm = nan, mm = nan;
        for (const auto& st : rec.branches) {
            if (st.branch == BranchLabel::plus_branch) {
                fp = st.f_star;
                mp = st.m_star;
            } else if (st.branch == BranchLabel::minus_branch) {
                fm = st.f_star;
                mm = st.m_star;
            }
        }
        os << fmt_num(rec.beta) << ',' << rec.branches.size() << ',' << fmt_num(fp) << ','
           << fmt_num(mp) << ',' << fmt_num(fm) << ',' << fmt_num(mm);
        for (int k = 0; k < 4; ++k)
            os << ',' << fmt_num(rec.asymptotic_l2[static_cast<size_t>(k)]);
        os << ',' << fmt_num(rec.f_mean) << ',' << fmt_num(rec.m_mean) << ','
           << (rec.converged ? 1 : 0) << '\n';
    }
}

} // namespace tyc
