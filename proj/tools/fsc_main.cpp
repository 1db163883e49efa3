// fsc — compile rule files to transducers, apply them to text, export DOT,
// and run the self-test corpus.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <fsc/apply.hpp>
#include <fsc/io.hpp>
#include <fsc/regex.hpp>
#include <fsc/selftest.hpp>

namespace {

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw fsc::Error(fsc::ErrorKind::Io, "cannot read '" + path + "'");
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

fsc::RenderMap parse_render(const std::vector<std::string>& items) {
    fsc::RenderMap out;
    for (const std::string& item : items) {
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw fsc::Error(fsc::ErrorKind::Io, "--render expects SYM=text, got '" + item + "'");
        std::string text;
        for (std::size_t i = eq + 1; i < item.size(); ++i) {
            if (item[i] == '\\' && i + 1 < item.size()) {
                char c = item[++i];
                text.push_back(c == 'n' ? '\n' : c == 't' ? '\t' : c);
            } else {
                text.push_back(item[i]);
            }
        }
        out[item.substr(0, eq)] = text;
    }
    return out;
}

int run_compile(const std::string& rules, const std::string& out) {
    std::string src = read_file(rules);
    fsc::SymbolTable table;
    auto [defs, net] = fsc::load_program(src, table);
    fsc::save_artifact(out, net, table, src);
    std::cerr << "wrote " << out << ": " << net.state_count() << " states, " << net.arc_count()
              << " arcs, " << net.sigma.size() << " symbols\n";
    return 0;
}

int run_apply(const std::string& artifact, bool up, bool all,
              const std::vector<std::string>& render_items) {
    fsc::CompiledArtifact art = fsc::load_artifact(artifact);
    fsc::RenderMap render = parse_render(render_items);
    fsc::Network net = up ? fsc::inverse(art.net) : art.net;
    if (!all) {
        fsc::transduce_stream(net, art.table, std::cin, std::cout, render);
        return 0;
    }
    std::string line;
    while (std::getline(std::cin, line)) {
        fsc::InputTokenization tok = fsc::tokenize_input(net, art.table, line);
        fsc::ApplyResult r = fsc::apply_down(net, art.table, tok, 1000, render);
        for (const std::string& o : r.outputs) std::cout << '\t' << o << '\n';
    }
    return 0;
}

int run_dot(const std::string& artifact, const std::string& out) {
    fsc::CompiledArtifact art = fsc::load_artifact(artifact);
    if (out == "-") {
        fsc::write_dot(std::cout, art.net, art.table);
        return 0;
    }
    std::ofstream os(out, std::ios::binary);
    if (!os) throw fsc::Error(fsc::ErrorKind::Io, "cannot write '" + out + "'");
    fsc::write_dot(os, art.net, art.table);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fsc: finite-state calculus rule compiler"};
    app.require_subcommand(1);

    std::string rules, artifact, out = "-", filter, recipes = "recipes";
    bool up = false, all = false;
    std::vector<std::string> render_items;

    auto* cmd_compile = app.add_subcommand("compile", "compile a rule file");
    cmd_compile->add_option("rules", rules, "rule file")->required();
    cmd_compile->add_option("-o,--output", out, "artifact path")->required();

    auto* cmd_apply = app.add_subcommand("apply", "apply an artifact to stdin");
    cmd_apply->add_option("artifact", artifact, "compiled artifact")->required();
    cmd_apply->add_flag("--up", up, "apply in the upward direction");
    cmd_apply->add_flag("--all", all, "print every output, tab-prefixed");
    cmd_apply->add_option("--render", render_items, "render SYM=text");

    auto* cmd_dot = app.add_subcommand("dot", "export an artifact as DOT");
    cmd_dot->add_option("artifact", artifact, "compiled artifact")->required();
    cmd_dot->add_option("-o,--output", out, "output file ('-' for stdout)");

    auto* cmd_selftest = app.add_subcommand("selftest", "run the acceptance checks");
    cmd_selftest->add_option("--filter", filter, "run only checks whose name contains this");
    cmd_selftest->add_option("--recipes", recipes, "recipes directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cmd_compile) return run_compile(rules, out);
        if (*cmd_apply) return run_apply(artifact, up, all, render_items);
        if (*cmd_dot) return run_dot(artifact, out);
        fsc::selftest::Options opt;
        opt.filter = filter;
        opt.recipes_dir = recipes;
        return fsc::selftest::run(opt, std::cout);
    } catch (const fsc::Error& e) {
        std::cerr << "fsc: " << e.what();
        if (e.line) std::cerr << " (line " << e.line << ", column " << e.column << ")";
        std::cerr << "\n";
        if (e.kind == fsc::ErrorKind::Io) return 3;
        if (e.kind == fsc::ErrorKind::AmbiguousOutput) return 2;
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "fsc: " << e.what() << "\n";
        return 1;
    }
}
