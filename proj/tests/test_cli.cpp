#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

// End-to-end checks of the fsc binary: exit codes and stdout behavior.
// FSC_CLI_PATH points at the built executable.

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) : path("/tmp/fsc_cli_test_" + name) {}
    ~TempFile() { std::remove(path.c_str()); }
    void write(const std::string& text) {
        std::ofstream os(path, std::ios::binary);
        os << text;
    }
    std::string read() const {
        std::ifstream is(path, std::ios::binary);
        std::ostringstream ss;
        ss << is.rdbuf();
        return ss.str();
    }
};

int run(const std::string& args) {
    std::string cmd = std::string(FSC_CLI_PATH) + " " + args + " 2>/dev/null";
    int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST_CASE("compile then apply a functional rule") {
    TempFile rules("rules.fsc"), art("rules.art"), in("in.txt"), out("out.txt");
    rules.write("a+ b @-> x ;\n");
    CHECK(run("compile " + rules.path + " -o " + art.path) == 0);
    in.write("aab\naaa\n");
    CHECK(run("apply " + art.path + " < " + in.path + " > " + out.path) == 0);
    CHECK(out.read() == "x\naaa\n");
}

TEST_CASE("apply --up and --all") {
    TempFile rules("up.fsc"), art("up.art"), in("upin.txt"), out("upout.txt");
    rules.write("a b | b @-> x ;\n");
    CHECK(run("compile " + rules.path + " -o " + art.path) == 0);
    in.write("x\n");
    CHECK(run("apply --up --all " + art.path + " < " + in.path + " > " + out.path) == 0);
    std::string got = out.read();
    CHECK(got.find("\tab\n") != std::string::npos);
    CHECK(got.find("\tb\n") != std::string::npos);
}

TEST_CASE("apply --render substitutes spellings") {
    TempFile rules("rn.fsc"), art("rn.art"), in("rnin.txt"), out("rnout.txt");
    rules.write("a -> \"MARK\" ;\n");
    CHECK(run("compile " + rules.path + " -o " + art.path) == 0);
    in.write("ba\n");
    CHECK(run("apply --render MARK=# " + art.path + " < " + in.path + " > " + out.path) == 0);
    CHECK(out.read() == "b#\n");
}

TEST_CASE("dot export writes a digraph") {
    TempFile rules("d.fsc"), art("d.art"), out("d.dot");
    rules.write("a:x | b ;\n");
    CHECK(run("compile " + rules.path + " -o " + art.path) == 0);
    CHECK(run("dot " + art.path + " -o " + out.path) == 0);
    CHECK(out.read().find("digraph fsc {") == 0);
}

TEST_CASE("exit code 1: compile errors") {
    TempFile rules("bad.fsc"), art("bad.art");
    rules.write("[] @-> x ;\n");  // empty string in UPPER
    CHECK(run("compile " + rules.path + " -o " + art.path) == 1);
    rules.write("a -> b // c _ d ;\n");  // unsupported context orientation
    CHECK(run("compile " + rules.path + " -o " + art.path) == 1);
    rules.write("a | ;\n");  // syntax error
    CHECK(run("compile " + rules.path + " -o " + art.path) == 1);
}

TEST_CASE("exit code 2: ambiguous output in stream mode") {
    TempFile rules("amb.fsc"), art("amb.art"), in("ambin.txt");
    rules.write("a -> x | y ;\n");
    CHECK(run("compile " + rules.path + " -o " + art.path) == 0);
    in.write("a\n");
    CHECK(run("apply " + art.path + " < " + in.path + " > /dev/null") == 2);
    // --all accepts ambiguity
    CHECK(run("apply --all " + art.path + " < " + in.path + " > /dev/null") == 0);
}

TEST_CASE("exit code 3: io errors") {
    CHECK(run("compile /nonexistent/rules.fsc -o /tmp/fsc_cli_test_x.art") == 3);
    CHECK(run("apply /nonexistent/artifact.art < /dev/null") == 3);
}

TEST_CASE("selftest subcommand runs a filtered check") {
    CHECK(run("selftest --recipes " + std::string(FSC_RECIPES_DIR) +
              " --filter simple-replace") == 0);
}
