#ifndef FSC_IO_HPP
#define FSC_IO_HPP

// Text serialization of networks, compiled artifacts (symbol names travel
// with the arcs, so an artifact is self-contained), and DOT export.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <fsc/network.hpp>
#include <fsc/symbols.hpp>

namespace fsc {

namespace detail {

inline std::string escape_name(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case '\t': out += "\\t"; break;
            case '\n': out += "\\n"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

inline std::string unescape_name(const std::string& s, int line) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '\\') {
            out.push_back(s[i]);
            continue;
        }
        if (i + 1 >= s.size())
            throw Error(ErrorKind::BadArtifact, "dangling escape in symbol name", line, 0);
        switch (s[++i]) {
            case '\\': out.push_back('\\'); break;
            case 't': out.push_back('\t'); break;
            case 'n': out.push_back('\n'); break;
            default:
                throw Error(ErrorKind::BadArtifact, "bad escape in symbol name", line, 0);
        }
    }
    return out;
}

inline std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == '\t') {
            out.push_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Network text format: header, tab-separated arc and final lines, symbols by
// name (escaped), sigma listed explicitly.

inline void write_network(std::ostream& os, const Network& net, const SymbolTable& table) {
    os << "#fsc1\tstates\t" << net.state_count() << "\tstart\t" << net.start << "\n";
    os << "sigma";
    for (SymbolId s : net.sigma) os << '\t' << detail::escape_name(table.name(s));
    os << "\n";
    for (std::uint32_t q = 0; q < net.state_count(); ++q) {
        if (net.is_final(q)) os << "final\t" << q << "\n";
        for (const Arc& a : net.states[q])
            os << "arc\t" << q << '\t' << a.target << '\t'
               << detail::escape_name(table.name(a.upper)) << '\t'
               << detail::escape_name(table.name(a.lower)) << "\n";
    }
}

inline std::string network_to_string(const Network& net, const SymbolTable& table) {
    std::ostringstream os;
    write_network(os, net, table);
    return os.str();
}

inline Network read_network(std::istream& is, SymbolTable& table) {
    std::string line;
    int ln = 0;
    auto bad = [&](const std::string& msg) -> Error {
        return Error(ErrorKind::BadArtifact, msg, ln, 0);
    };
    if (!std::getline(is, line)) throw bad("empty network section");
    ++ln;
    auto head = detail::split_tabs(line);
    if (head.size() != 5 || head[0] != "#fsc1" || head[1] != "states" || head[3] != "start")
        throw bad("bad network header");
    Network net;
    std::size_t states = std::stoul(head[2]);
    for (std::size_t q = 0; q < states; ++q) net.add_state(false);
    net.start = static_cast<std::uint32_t>(std::stoul(head[4]));
    if (states == 0 || net.start >= states) throw bad("bad start state");
    while (std::getline(is, line)) {
        ++ln;
        if (line.empty()) continue;
        auto f = detail::split_tabs(line);
        if (f[0] == "sigma") {
            for (std::size_t i = 1; i < f.size(); ++i)
                net.sigma.insert(table.intern_any(detail::unescape_name(f[i], ln)));
        } else if (f[0] == "final" && f.size() == 2) {
            std::size_t q = std::stoul(f[1]);
            if (q >= states) throw bad("final state out of range");
            net.set_final(static_cast<std::uint32_t>(q), true);
        } else if (f[0] == "arc" && f.size() == 5) {
            std::size_t from = std::stoul(f[1]), to = std::stoul(f[2]);
            if (from >= states || to >= states) throw bad("arc state out of range");
            net.add_arc(static_cast<std::uint32_t>(from),
                        table.intern_any(detail::unescape_name(f[3], ln)),
                        table.intern_any(detail::unescape_name(f[4], ln)),
                        static_cast<std::uint32_t>(to));
        } else {
            throw bad("unrecognized line '" + line + "'");
        }
    }
    net.sort_arcs();
    return net;
}

// ---------------------------------------------------------------------------
// Compiled artifact: version line, hash of the rule source, network section.

struct CompiledArtifact {
    SymbolTable table;
    Network net;
    std::string source_hash;
};

inline void save_artifact(const std::string& path, const Network& net,
                          const SymbolTable& table, const std::string& source) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error(ErrorKind::Io, "cannot write '" + path + "'");
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(detail::fnv1a(source)));
    os << "#fscart1\thash\t" << hex << "\n";
    write_network(os, net, table);
    if (!os) throw Error(ErrorKind::Io, "write failed for '" + path + "'");
}

inline CompiledArtifact load_artifact(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error(ErrorKind::Io, "cannot read '" + path + "'");
    std::string line;
    if (!std::getline(is, line)) throw Error(ErrorKind::BadArtifact, "empty artifact", 1, 0);
    auto head = detail::split_tabs(line);
    if (head.size() != 3 || head[0] != "#fscart1" || head[1] != "hash")
        throw Error(ErrorKind::BadArtifact, "bad artifact header", 1, 0);
    CompiledArtifact art;
    art.source_hash = head[2];
    art.net = read_network(is, art.table);
    return art;
}

// ---------------------------------------------------------------------------
// DOT export: final states doubly circled, parallel arcs collapsed into one
// edge with comma-joined labels, identity pairs written as the bare symbol.

inline std::string dot_label_symbol(SymbolId s, const SymbolTable& table) {
    if (s == EPSILON) return "0";
    if (s == OTHER || s == UNKNOWN) return "?";
    if (s == BOUNDARY) return ".#.";
    return table.name(s);
}

inline void write_dot(std::ostream& os, const Network& net, const SymbolTable& table) {
    auto esc = [](const std::string& s) {
        std::string out;
        for (char c : s) {
            if (c == '"' || c == '\\') out.push_back('\\');
            if (c == '\n') { out += "\\n"; continue; }
            out.push_back(c);
        }
        return out;
    };
    os << "digraph fsc {\n  rankdir = LR;\n  node [shape = circle];\n";
    std::size_t n = net.state_count();
    if (n == 0) {
        os << "  q0;\n}\n";
        return;
    }
    for (std::uint32_t q = 0; q < n; ++q)
        if (net.is_final(q)) os << "  q" << q << " [shape = doublecircle];\n";
    os << "  entry [shape = point];\n  entry -> q" << net.start << ";\n";
    for (std::uint32_t q = 0; q < n; ++q) {
        std::map<std::uint32_t, std::string> collapsed;
        for (const Arc& a : net.states[q]) {
            std::string lab = dot_label_symbol(a.upper, table);
            if (a.upper != a.lower || a.upper == UNKNOWN)
                lab += ":" + dot_label_symbol(a.lower, table);
            auto& slot = collapsed[a.target];
            if (!slot.empty()) slot += ", ";
            slot += lab;
        }
        for (auto& [to, lab] : collapsed)
            os << "  q" << q << " -> q" << to << " [label = \"" << esc(lab) << "\"];\n";
    }
    os << "}\n";
}

}  // namespace fsc

#endif
