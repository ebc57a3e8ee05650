#include "powerd/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace powerd {

void write_sites(const SiteSet& s, const std::string& path,
                 const std::vector<std::string>& comments, bool with_weights) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    for (const auto& c : comments) out << "# " << c << "\n";
    out << s.dim << " " << s.size() << "\n";
    for (int i = 0; i < s.size(); ++i) {
        for (int c = 0; c < s.dim; ++c) out << (c ? " " : "") << fmt17(s.points[i][c]);
        if (with_weights) out << " " << fmt17(s.weights[i]);
        out << "\n";
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

SiteSet read_sites(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    auto next_data_line = [&]() -> bool {
        while (std::getline(in, line))
            if (!line.empty() && line[0] != '#') return true;
        return false;
    };
    if (!next_data_line()) throw std::runtime_error("empty site file: " + path);

    SiteSet s;
    int n = 0;
    {
        std::istringstream hdr(line);
        if (!(hdr >> s.dim >> n) || s.dim < 1 || s.dim > 6 || n < 1)
            throw std::runtime_error("malformed site file header: " + line);
    }
    bool has_weights = false;
    for (int i = 0; i < n; ++i) {
        if (!next_data_line()) throw std::runtime_error("site file truncated: " + path);
        std::istringstream row(line);
        std::vector<double> vals;
        double v;
        while (row >> v) vals.push_back(v);
        if (i == 0) has_weights = (static_cast<int>(vals.size()) == s.dim + 1);
        int expect = s.dim + (has_weights ? 1 : 0);
        if (static_cast<int>(vals.size()) != expect)
            throw std::runtime_error("malformed site row: " + line);
        Vec p(s.dim);
        for (int c = 0; c < s.dim; ++c) p[c] = vals[c];
        s.points.push_back(p);
        s.weights.push_back(has_weights ? vals[s.dim] : 0.0);
    }
    s.lift();
    return s;
}

void write_table(const TextTable& t, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    for (const auto& c : t.comments) out << "# " << c << "\n";
    for (const auto& c : t.timing_comments) out << "#T " << c << "\n";
    for (size_t i = 0; i < t.columns.size(); ++i) out << (i ? " " : "") << t.columns[i];
    out << "\n";
    for (const auto& row : t.rows) {
        for (size_t i = 0; i < row.size(); ++i) out << (i ? " " : "") << fmt17(row[i]);
        out << "\n";
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

TextTable read_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    TextTable t;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.rfind("#T ", 0) == 0) {
            t.timing_comments.push_back(line.substr(3));
            continue;
        }
        if (line[0] == '#') {
            t.comments.push_back(line.size() > 2 ? line.substr(2) : "");
            continue;
        }
        if (!header_seen) {
            std::istringstream hdr(line);
            std::string col;
            while (hdr >> col) t.columns.push_back(col);
            header_seen = true;
            continue;
        }
        std::istringstream row(line);
        std::vector<double> vals;
        double v;
        while (row >> v) vals.push_back(v);
        if (vals.size() != t.columns.size())
            throw std::runtime_error("table row width mismatch: " + line);
        t.rows.push_back(std::move(vals));
    }
    if (!header_seen) throw std::runtime_error("table missing header: " + path);
    return t;
}

}  // namespace powerd
