#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <string>
#include <vector>

#include <fsc/io.hpp>

#include "helpers.hpp"

using namespace fsc;

namespace {

ErrorKind kind_of(const std::string& src) {
    SymbolTable tb;
    try {
        load_program(src, tb);
    } catch (const Error& e) {
        return e.kind;
    }
    FAIL("expected an error for: " << src);
    return ErrorKind::Io;
}

}  // namespace

TEST_CASE("tokenize basics") {
    auto toks = tokenize("a b* | c+ ;");
    std::vector<Tok> kinds;
    for (auto& t : toks) kinds.push_back(t.kind);
    CHECK(kinds == std::vector<Tok>{Tok::Symbol, Tok::Symbol, Tok::Star, Tok::Pipe,
                                    Tok::Symbol, Tok::Plus, Tok::Semi, Tok::End});
    CHECK(toks[0].text == "a");
    CHECK(toks[0].line == 1);
    CHECK(toks[0].column == 1);
    CHECK(toks[4].column == 8);
}

TEST_CASE("tokenize operators and dotted tokens") {
    auto toks = tokenize(".#. .x. .o. -> @-> @> ->@ >@ || _ ... define");
    std::vector<Tok> kinds;
    for (auto& t : toks) kinds.push_back(t.kind);
    CHECK(kinds == std::vector<Tok>{Tok::Boundary, Tok::Cross, Tok::Compose, Tok::Arrow,
                                    Tok::DirLL, Tok::DirLS, Tok::DirRL, Tok::DirRS,
                                    Tok::DPipe, Tok::Underscore, Tok::Ellipsis, Tok::Define,
                                    Tok::End});
}

TEST_CASE("quoted names are single symbols") {
    auto toks = tokenize("\"END_OF_TOKEN\" \"<A>\" \"a\\\"b\" \"x\\ny\"");
    REQUIRE(toks.size() == 5);
    CHECK(toks[0].kind == Tok::Symbol);
    CHECK(toks[0].text == "END_OF_TOKEN");
    CHECK(toks[1].text == "<A>");
    CHECK(toks[2].text == "a\"b");
    CHECK(toks[3].text == "x\ny");
}

TEST_CASE("bare identifiers: one codepoint is a symbol, more is a name reference") {
    auto toks = tokenize("a ab é NP_Marker 0");
    CHECK(toks[0].kind == Tok::Symbol);
    CHECK(toks[1].kind == Tok::NameRef);
    CHECK(toks[2].kind == Tok::Symbol);  // one multibyte codepoint
    CHECK(toks[2].text == "é");
    CHECK(toks[3].kind == Tok::NameRef);
    CHECK(toks[4].kind == Tok::Epsilon);
}

TEST_CASE("percent escapes one codepoint") {
    auto toks = tokenize("%[ %] %% %? %0");
    for (int i = 0; i < 5; ++i) CHECK(toks[i].kind == Tok::Symbol);
    CHECK(toks[0].text == "[");
    CHECK(toks[1].text == "]");
    CHECK(toks[2].text == "%");
    CHECK(toks[3].text == "?");
    CHECK(toks[4].text == "0");
}

TEST_CASE("comments run to end of line") {
    auto toks = tokenize("a ! b c d\nb");
    REQUIRE(toks.size() == 3);
    CHECK(toks[0].text == "a");
    CHECK(toks[1].text == "b");
    CHECK(toks[1].line == 2);
}

TEST_CASE("lexical errors") {
    CHECK(kind_of("\"abc ;") == ErrorKind::UnterminatedQuote);
    CHECK(kind_of("a%") == ErrorKind::DanglingEscape);
    CHECK(kind_of("\"a\\qb\" ;") == ErrorKind::DanglingEscape);
    CHECK(kind_of("a \\ b ;") == ErrorKind::UnsupportedContextOrientation);
    CHECK(kind_of("a // b ;") == ErrorKind::UnsupportedContextOrientation);
}

TEST_CASE("parse errors carry positions") {
    SymbolTable tb;
    try {
        load_program("a |\n| b ;", tb);
        FAIL("expected SyntaxError");
    } catch (const Error& e) {
        CHECK(e.kind == ErrorKind::SyntaxError);
        CHECK(e.line == 2);
        CHECK(e.column == 1);
    }
    CHECK(kind_of("") == ErrorKind::SyntaxError);
    CHECK(kind_of("a b ; c d ;") == ErrorKind::SyntaxError);  // two main expressions
    CHECK(kind_of("SOME_NAME ;") == ErrorKind::UnknownName);
    CHECK(kind_of("define x a ;") == ErrorKind::SyntaxError);  // name too short
    CHECK(kind_of("a -> b // c _ d ;") == ErrorKind::UnsupportedContextOrientation);
    CHECK(kind_of("a:[b c] ;") == ErrorKind::SyntaxError);  // ':' joins single symbols
    CHECK(kind_of("a @-> b , c -> d ;") == ErrorKind::SyntaxError);  // ',' needs directed rules
    CHECK(kind_of("a @-> b , c @> d ;") == ErrorKind::SyntaxError);  // mixed operators
}

TEST_CASE("precedence") {
    // postfix binds tighter than concat; concat tighter than union
    CHECK(ast_equal(*parse("a b | c*"), *parse("[a b] | [c*]")));
    // prefix operators bind tighter than concat
    CHECK(ast_equal(*parse("~a b"), *parse("[~a] b")));
    CHECK(ast_equal(*parse("$a b"), *parse("[$a] b")));
    // ignore binds tighter than prefix
    CHECK(ast_equal(*parse("~a/b"), *parse("~[a/b]")));
    // difference and intersection bind tighter than union
    CHECK(ast_equal(*parse("a - b | c"), *parse("[a - b] | c")));
    CHECK(ast_equal(*parse("a & b | c"), *parse("[a & b] | c")));
    // union binds tighter than replacement
    CHECK(ast_equal(*parse("a | b -> x | y"), *parse("[a | b] -> [x | y]")));
    // crossproduct sits with the replace family, looser than union
    CHECK(ast_equal(*parse("a | b .x. x | y"), *parse("[a | b] .x. [x | y]")));
    // compose is loosest
    CHECK(ast_equal(*parse("a -> b .o. c -> d"), *parse("[a -> b] .o. [c -> d]")));
    CHECK(ast_equal(*parse("a @-> b , b @-> a .o. c -> d"),
                    *parse("[a @-> b , b @-> a] .o. [c -> d]")));
    // pair binds tightest
    CHECK(ast_equal(*parse("a:b*"), *parse("[a:b]*")));
}

TEST_CASE("pretty_print reparses to an equal tree") {
    const char* exprs[] = {
        "a", "ab", "0", "?", "[]", "a:b", "a:0", "0:a", "?:a", "a:?",
        "a b", "a | b", "a & b", "a - b", "a / b", "$a", "~a",
        "a*", "a+", "(a)", "a .x. b", "a .o. b",
        "a -> b", "a -> b || c _ d", "a -> b || _ d", "a -> b || c _",
        "a -> b || .#. _", "a -> b || _ .#.",
        "a @-> b", "a @> b", "a ->@ b", "a >@ b",
        "a @-> p ... q", "a @-> ... q", "a @-> p ...", "a @-> ...",
        "a @-> b , b @-> a", "\"<A>\" \"</A>\"",
        "~$[a b] (c) [a|b]+ / x",
        "[a b | b | b a | a b a] -> x",
        "a+ @-> b , b+ @-> a , [a b]+ @-> p ... q",
    };
    for (const char* e : exprs) {
        AstPtr first = parse(e);
        std::string printed = pretty_print(*first);
        AstPtr second = parse(printed);
        CHECK_MESSAGE(ast_equal(*first, *second), "expr: " << e << " printed: " << printed);
        CHECK(pretty_print(*second) == printed);
    }
}

TEST_CASE("compiled semantics of the core syntax") {
    SymbolTable tb;
    CHECK(t::lang(t::net("[]", tb), tb, 2) == std::set<std::string>{""});
    CHECK(t::lang(t::net("0", tb), tb, 2) == std::set<std::string>{""});
    CHECK(t::lang(t::net("(a)", tb), tb, 2) == std::set<std::string>{"", "a"});
    CHECK(t::pairs(t::net("a:0", tb), tb, 2) == std::set<std::string>{"a -> "});
    CHECK(t::pairs(t::net("0:a", tb), tb, 2) == std::set<std::string>{" -> a"});
    // ? on one side of a pair is a non-identity unknown
    CHECK(t::pairs(t::net("?:a", tb), tb, 1, "z") == std::set<std::string>{"z -> a"});
    // bare ? is identity over unknown symbols
    CHECK(t::pairs(t::net("?", tb), tb, 1, "z") == std::set<std::string>{"z -> z"});
}

TEST_CASE("definitions") {
    SymbolTable tb;
    auto [defs, net] = load_program("define VOWEL a | e ; VOWEL+ ;", tb);
    CHECK(defs.count("VOWEL"));
    CHECK(t::accepts_str(net, tb, "ae"));
    CHECK_FALSE(t::accepts_str(net, tb, ""));
    CHECK_FALSE(t::accepts_str(net, tb, "b"));
    // definitions may use earlier definitions
    SymbolTable tb2;
    auto [d2, n2] = load_program("define AB a b ; define ABS AB+ ; ABS ;", tb2);
    CHECK(t::accepts_str(n2, tb2, "abab"));
}

TEST_CASE("compilation is deterministic") {
    const char* src = "define NP (d) a* n+ ; NP @-> %[ ... %] .o. a -> b || n _ ;";
    SymbolTable t1, t2;
    auto [d1, n1] = load_program(src, t1);
    auto [d2, n2] = load_program(src, t2);
    // byte-identical serialization across independent compiles
    CHECK(network_to_string(n1, t1) == network_to_string(n2, t2));
}
