#include "schottky/group_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace schottky {

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

} // namespace

std::string serialize_group(const SchottkyGroup& g) {
    std::ostringstream out;
    out << "schottky-group v1\n";
    out << "model " << (g.model == Model::Disc ? "disc" : "halfplane") << "\n";
    out << "rank " << g.rank << "\n";
    if (!g.label.empty()) out << "label " << g.label << "\n";
    if (g.integer_trace) out << "integer_trace true\n";
    for (const Moebius& m : g.gens) {
        out << "generator " << fmt17(m.a.real()) << " " << fmt17(m.b.real()) << " "
            << fmt17(m.c.real()) << " " << fmt17(m.d.real()) << "\n";
    }
    return out.str();
}

SchottkyGroup parse_group(const std::string& text) {
    SchottkyGroup g;
    bool saw_header = false, saw_model = false, saw_rank = false;
    int declared_rank = -1;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    auto fail = [&lineno](const std::string& what) {
        throw std::invalid_argument("group file line " + std::to_string(lineno) + ": " + what);
    };
    while (std::getline(in, raw)) {
        ++lineno;
        const auto hash = raw.find('#');
        std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        if (!saw_header) {
            if (line != "schottky-group v1") fail("expected header 'schottky-group v1'");
            saw_header = true;
            continue;
        }
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "model") {
            std::string val;
            ls >> val;
            if (val == "disc") {
                g.model = Model::Disc;
            } else if (val == "halfplane") {
                g.model = Model::HalfPlane;
            } else {
                fail("model must be 'disc' or 'halfplane'");
            }
            saw_model = true;
        } else if (key == "rank") {
            if (!(ls >> declared_rank) || declared_rank < 1) fail("rank must be a positive integer");
            saw_rank = true;
        } else if (key == "label") {
            std::string rest;
            std::getline(ls, rest);
            g.label = trim(rest);
        } else if (key == "integer_trace") {
            std::string val;
            ls >> val;
            if (val == "true") {
                g.integer_trace = true;
            } else if (val == "false") {
                g.integer_trace = false;
            } else {
                fail("integer_trace must be 'true' or 'false'");
            }
        } else if (key == "generator") {
            double a, b, c, d;
            if (!(ls >> a >> b >> c >> d)) fail("generator needs four real entries");
            std::string extra;
            if (ls >> extra) fail("generator has trailing tokens");
            g.gens.push_back(Moebius::from_real(a, b, c, d));
        } else {
            fail("unknown key '" + key + "'");
        }
    }
    if (!saw_header) throw std::invalid_argument("group file is empty");
    if (!saw_model) throw std::invalid_argument("group file lacks a model line");
    if (!saw_rank) throw std::invalid_argument("group file lacks a rank line");
    if (declared_rank != static_cast<int>(g.gens.size())) {
        throw std::invalid_argument("rank does not match the number of generator lines");
    }
    g.rank = declared_rank;
    g.cylinder_mode = (g.rank == 1);
    finalize_group(g);
    return g;
}

void write_group(const SchottkyGroup& g, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << serialize_group(g);
}

SchottkyGroup read_group(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open group file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_group(buf.str());
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (const unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string file_hash_hex(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file for hashing: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string s = buf.str();
    char out[17];
    std::snprintf(out, sizeof(out), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(s)));
    return out;
}

} // namespace schottky
