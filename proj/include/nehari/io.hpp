#ifndef NEHARI_IO_HPP
#define NEHARI_IO_HPP

// CSV tables with '#' header comments, 17 significant digits, and the
// gnuplot scripts that go with them.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "grid.hpp"

namespace nehari {

inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

class CsvTable {
public:
    // each column comes with a one-line definition for the header
    void column(std::string name, std::string definition) {
        names_.push_back(std::move(name));
        defs_.push_back(std::move(definition));
    }
    void comment(std::string line) { comments_.push_back(std::move(line)); }
    void row(const std::vector<std::string>& cells) {
        if (cells.size() != names_.size()) throw NonPositiveInput("CSV row width does not match the header");
        rows_.push_back(cells);
    }
    void row(const std::vector<double>& values) {
        std::vector<std::string> cells;
        for (double v : values) cells.push_back(fmt17(v));
        row(cells);
    }
    const std::vector<std::string>& names() const { return names_; }
    std::size_t size() const { return rows_.size(); }

    std::string str() const {
        std::string out;
        for (const auto& c : comments_) out += "# " + c + "\n";
        for (std::size_t i = 0; i < names_.size(); ++i) out += "# " + names_[i] + ": " + defs_[i] + "\n";
        for (std::size_t i = 0; i < names_.size(); ++i) out += (i ? "," : "") + names_[i];
        out += "\n";
        for (const auto& r : rows_) {
            for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + r[i];
            out += "\n";
        }
        return out;
    }
    void write(const std::filesystem::path& path) const { write_text(path, str()); }

    static void write_text(const std::filesystem::path& path, const std::string& text) {
        if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
        std::ofstream out(path, std::ios::binary);
        if (!out) throw NonPositiveInput("cannot write " + path.string());
        out << text;
    }

private:
    std::vector<std::string> names_, defs_, comments_;
    std::vector<std::vector<std::string>> rows_;
};

inline CsvTable field_table(const Field& u, const std::string& what) {
    CsvTable t;
    t.comment(what);
    t.comment("grid: N=" + std::to_string(u.grid.dim) + " n=" + std::to_string(u.grid.n) + " L=" + fmt17(u.grid.half_width));
    t.column("x", "node coordinate");
    if (u.grid.dim == 2) t.column("y", "node coordinate");
    t.column("u", "field value at the node");
    for (std::size_t k = 0; k < u.size(); ++k) {
        const Node x = unflat(u.grid, k);
        if (u.grid.dim == 1)
            t.row(std::vector<double>{u.grid.coord(x.i), u[k]});
        else
            t.row(std::vector<double>{u.grid.coord(x.i), u.grid.coord(x.j), u[k]});
    }
    return t;
}

// gnuplot script plotting columns `ys` against `x` from a CSV written above
inline std::string gnuplot_script(const std::string& csv, const std::string& png, const std::string& title,
                                  const std::vector<std::string>& names, const std::string& x,
                                  const std::vector<std::string>& ys, bool logx = false) {
    auto col = [&](const std::string& n) {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == n) return std::to_string(i + 1);
        throw NonPositiveInput("no column " + n);
    };
    std::string s;
    s += "set datafile separator ','\n";
    s += "set datafile commentschars '#'\n";
    s += "set key autotitle columnhead\n";
    s += "set terminal pngcairo size 900,600\n";
    s += "set output '" + png + "'\n";
    s += "set title '" + title + "'\n";
    s += "set xlabel '" + x + "'\n";
    if (logx) s += "set logscale x\n";
    s += "plot ";
    for (std::size_t i = 0; i < ys.size(); ++i) {
        if (i) s += ", \\\n     ";
        s += "'" + csv + "' using " + col(x) + ":" + col(ys[i]) + " with linespoints title '" + ys[i] + "'";
    }
    s += "\n";
    return s;
}

inline void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j) {
    CsvTable::write_text(path, j.dump(2) + "\n");
}

}

#endif
