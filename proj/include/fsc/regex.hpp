#ifndef FSC_REGEX_HPP
#define FSC_REGEX_HPP

// Lexer, parser and compiler for the rule-file formalism:
//   0 ? .#. %c "name" [ ] ( ) * + : / ~ $ & - | .x. .o.
//   -> (with optional || L _ R) @-> @> ->@ >@ , ...
// plus `define NAME expr ;` statements and `!` comments.

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <fsc/replace.hpp>
#include <fsc/symbols.hpp>

namespace fsc {

// ---------------------------------------------------------------------------
// Tokens

enum class Tok {
    Symbol,     // bare single character, %-escaped character, or quoted name
    NameRef,    // bare multi-letter identifier
    Epsilon,    // 0
    Any,        // ?
    Boundary,   // .#.
    LBrack, RBrack, LParen, RParen,
    Star, Plus, Colon, Slash, Tilde, Dollar, Amp, Minus, Pipe,
    Cross,      // .x.
    Compose,    // .o.
    Arrow,      // ->
    DirLL,      // @->  left-to-right, longest
    DirLS,      // @>   left-to-right, shortest
    DirRL,      // ->@  right-to-left, longest
    DirRS,      // >@   right-to-left, shortest
    Comma, DPipe, Underscore, Ellipsis,
    Define, Semi, End,
};

struct Token {
    Tok kind;
    std::string text;
    int line = 1;
    int column = 1;
};

namespace detail {

inline bool ident_byte(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '_' || c >= 0x80;
}

inline std::size_t codepoints(const std::string& s) {
    std::size_t n = 0;
    for (unsigned char c : s)
        if ((c & 0xC0) != 0x80) ++n;
    return n;
}

}  // namespace detail

inline std::vector<Token> tokenize(const std::string& src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto push = [&](Tok k, std::string t, int ln, int cl) {
        out.push_back(Token{k, std::move(t), ln, cl});
    };
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else if ((static_cast<unsigned char>(src[i]) & 0xC0) != 0x80) {
                ++col;
            }
            ++i;
        }
    };
    while (i < src.size()) {
        char c = src[i];
        int ln = line, cl = col;
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance(1);
            continue;
        }
        if (c == '!') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        if (c == '"') {
            advance(1);
            std::string name;
            bool closed = false;
            while (i < src.size()) {
                char d = src[i];
                if (d == '"') {
                    advance(1);
                    closed = true;
                    break;
                }
                if (d == '\\') {
                    if (i + 1 >= src.size())
                        throw Error(ErrorKind::UnterminatedQuote, "unterminated quoted symbol",
                                    ln, cl);
                    char e = src[i + 1];
                    advance(2);
                    switch (e) {
                        case 'n': name.push_back('\n'); break;
                        case 't': name.push_back('\t'); break;
                        case '"': name.push_back('"'); break;
                        case '\\': name.push_back('\\'); break;
                        default:
                            throw Error(ErrorKind::DanglingEscape,
                                        std::string("unknown escape \\") + e + " in quotes",
                                        ln, cl);
                    }
                    continue;
                }
                name.push_back(d);
                advance(1);
            }
            if (!closed)
                throw Error(ErrorKind::UnterminatedQuote, "unterminated quoted symbol", ln, cl);
            push(Tok::Symbol, name, ln, cl);
            continue;
        }
        if (c == '%') {
            if (i + 1 >= src.size())
                throw Error(ErrorKind::DanglingEscape, "% at end of input", ln, cl);
            // take one whole UTF-8 codepoint
            std::size_t j = i + 1, k = j + 1;
            while (k < src.size() && (static_cast<unsigned char>(src[k]) & 0xC0) == 0x80) ++k;
            std::string name = src.substr(j, k - j);
            advance(1 + name.size());
            push(Tok::Symbol, name, ln, cl);
            continue;
        }
        if (c == '.') {
            if (src.compare(i, 3, ".x.") == 0) { advance(3); push(Tok::Cross, ".x.", ln, cl); continue; }
            if (src.compare(i, 3, ".o.") == 0) { advance(3); push(Tok::Compose, ".o.", ln, cl); continue; }
            if (src.compare(i, 3, ".#.") == 0) { advance(3); push(Tok::Boundary, ".#.", ln, cl); continue; }
            if (src.compare(i, 3, "...") == 0) { advance(3); push(Tok::Ellipsis, "...", ln, cl); continue; }
            throw Error(ErrorKind::SyntaxError, "stray '.'", ln, cl);
        }
        if (c == '@') {
            if (src.compare(i, 3, "@->") == 0) { advance(3); push(Tok::DirLL, "@->", ln, cl); continue; }
            if (src.compare(i, 2, "@>") == 0) { advance(2); push(Tok::DirLS, "@>", ln, cl); continue; }
            throw Error(ErrorKind::SyntaxError, "stray '@'", ln, cl);
        }
        if (c == '-') {
            if (src.compare(i, 3, "->@") == 0) { advance(3); push(Tok::DirRL, "->@", ln, cl); continue; }
            if (src.compare(i, 2, "->") == 0) { advance(2); push(Tok::Arrow, "->", ln, cl); continue; }
            advance(1);
            push(Tok::Minus, "-", ln, cl);
            continue;
        }
        if (c == '>') {
            if (src.compare(i, 2, ">@") == 0) { advance(2); push(Tok::DirRS, ">@", ln, cl); continue; }
            throw Error(ErrorKind::SyntaxError, "stray '>'", ln, cl);
        }
        if (c == '|') {
            if (src.compare(i, 2, "||") == 0) { advance(2); push(Tok::DPipe, "||", ln, cl); continue; }
            advance(1);
            push(Tok::Pipe, "|", ln, cl);
            continue;
        }
        if (c == '/' || c == '\\') {
            if (c == '\\' || src.compare(i, 2, "//") == 0)
                throw Error(ErrorKind::UnsupportedContextOrientation,
                            "only the || context orientation is supported", ln, cl);
            advance(1);
            push(Tok::Slash, "/", ln, cl);
            continue;
        }
        switch (c) {
            case '[': advance(1); push(Tok::LBrack, "[", ln, cl); continue;
            case ']': advance(1); push(Tok::RBrack, "]", ln, cl); continue;
            case '(': advance(1); push(Tok::LParen, "(", ln, cl); continue;
            case ')': advance(1); push(Tok::RParen, ")", ln, cl); continue;
            case '*': advance(1); push(Tok::Star, "*", ln, cl); continue;
            case '+': advance(1); push(Tok::Plus, "+", ln, cl); continue;
            case ':': advance(1); push(Tok::Colon, ":", ln, cl); continue;
            case '~': advance(1); push(Tok::Tilde, "~", ln, cl); continue;
            case '$': advance(1); push(Tok::Dollar, "$", ln, cl); continue;
            case '&': advance(1); push(Tok::Amp, "&", ln, cl); continue;
            case ',': advance(1); push(Tok::Comma, ",", ln, cl); continue;
            case ';': advance(1); push(Tok::Semi, ";", ln, cl); continue;
            case '?': advance(1); push(Tok::Any, "?", ln, cl); continue;
            default: break;
        }
        if (detail::ident_byte(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && detail::ident_byte(static_cast<unsigned char>(src[j]))) ++j;
            std::string word = src.substr(i, j - i);
            advance(word.size());
            if (word == "_") {
                push(Tok::Underscore, word, ln, cl);
            } else if (word == "0") {
                push(Tok::Epsilon, word, ln, cl);
            } else if (word == "define") {
                push(Tok::Define, word, ln, cl);
            } else if (detail::codepoints(word) == 1) {
                push(Tok::Symbol, word, ln, cl);
            } else {
                push(Tok::NameRef, word, ln, cl);
            }
            continue;
        }
        throw Error(ErrorKind::SyntaxError, std::string("unexpected character '") + c + "'",
                    ln, cl);
    }
    out.push_back(Token{Tok::End, "", line, col});
    return out;
}

// ---------------------------------------------------------------------------
// AST

enum class AstKind {
    Symbol, Pair, EmptyStringLang, Any, Boundary,
    Union, Concat, Intersect, Minus, Ignore, Contains, Complement,
    Star, Plus, Optional, Crossproduct, Compose,
    SimpleReplace, ConditionalReplace, DirectedReplace, MarkupReplace,
    ParallelReplace, NameRef,
};

struct Ast {
    AstKind kind;
    std::vector<std::unique_ptr<Ast>> kids;
    std::string name;  // Symbol / NameRef spelling; Pair uses kids' names
    Direction direction = Direction::LeftToRight;
    LengthMode length = LengthMode::Longest;
    bool has_left = false, has_right = false;  // ConditionalReplace contexts
    int line = 0, column = 0;
};

using AstPtr = std::unique_ptr<Ast>;

inline bool ast_equal(const Ast& a, const Ast& b) {
    if (a.kind != b.kind || a.name != b.name || a.direction != b.direction ||
        a.length != b.length || a.has_left != b.has_left || a.has_right != b.has_right ||
        a.kids.size() != b.kids.size())
        return false;
    for (std::size_t i = 0; i < a.kids.size(); ++i)
        if (!ast_equal(*a.kids[i], *b.kids[i])) return false;
    return true;
}

namespace detail {

inline AstPtr mk(AstKind k, const Token& at) {
    auto p = std::make_unique<Ast>();
    p->kind = k;
    p->line = at.line;
    p->column = at.column;
    return p;
}

inline AstPtr mk2(AstKind k, AstPtr a, AstPtr b) {
    auto p = std::make_unique<Ast>();
    p->kind = k;
    p->line = a->line;
    p->column = a->column;
    p->kids.push_back(std::move(a));
    p->kids.push_back(std::move(b));
    return p;
}

struct Parser {
    const std::vector<Token>& t;
    std::size_t pos = 0;

    const Token& peek(std::size_t ahead = 0) const {
        std::size_t k = pos + ahead;
        return k < t.size() ? t[k] : t.back();
    }
    const Token& take() { return t[pos < t.size() - 1 ? pos++ : pos]; }
    [[noreturn]] void fail(const std::string& msg, const Token& at) const {
        throw Error(ErrorKind::SyntaxError, msg, at.line, at.column);
    }
    const Token& expect(Tok k, const char* what) {
        if (peek().kind != k) fail(std::string("expected ") + what, peek());
        return take();
    }

    static bool starts_term(Tok k) {
        switch (k) {
            case Tok::Symbol: case Tok::NameRef: case Tok::Epsilon: case Tok::Any:
            case Tok::Boundary: case Tok::LBrack: case Tok::LParen:
            case Tok::Tilde: case Tok::Dollar:
                return true;
            default:
                return false;
        }
    }

    AstPtr parse_expr() { return parse_compose(); }

    AstPtr parse_compose() {
        AstPtr a = parse_parallel();
        while (peek().kind == Tok::Compose) {
            take();
            a = mk2(AstKind::Compose, std::move(a), parse_parallel());
        }
        return a;
    }

    AstPtr parse_parallel() {
        AstPtr a = parse_replace();
        if (peek().kind != Tok::Comma) return a;
        auto p = std::make_unique<Ast>();
        p->kind = AstKind::ParallelReplace;
        p->line = a->line;
        p->column = a->column;
        p->kids.push_back(std::move(a));
        while (peek().kind == Tok::Comma) {
            take();
            p->kids.push_back(parse_replace());
        }
        for (auto& k : p->kids)
            if (k->kind != AstKind::DirectedReplace && k->kind != AstKind::MarkupReplace)
                fail("',' joins directed replacement rules only", peek());
        for (auto& k : p->kids)
            if (k->direction != p->kids[0]->direction || k->length != p->kids[0]->length)
                fail("parallel rules must share one operator", peek());
        p->direction = p->kids[0]->direction;
        p->length = p->kids[0]->length;
        return p;
    }

    AstPtr parse_replace() {
        AstPtr upper = parse_union();
        while (peek().kind == Tok::Cross) {
            take();
            upper = mk2(AstKind::Crossproduct, std::move(upper), parse_union());
        }
        Tok k = peek().kind;
        if (k == Tok::Arrow) {
            const Token& op = take();
            AstPtr lower = parse_union();
            if (peek().kind != Tok::DPipe) {
                auto p = mk2(AstKind::SimpleReplace, std::move(upper), std::move(lower));
                return p;
            }
            take();
            auto p = mk(AstKind::ConditionalReplace, op);
            p->kids.push_back(std::move(upper));
            p->kids.push_back(std::move(lower));
            if (starts_term(peek().kind)) {
                p->kids.push_back(parse_union());
                p->has_left = true;
            }
            expect(Tok::Underscore, "'_' in context");
            if (starts_term(peek().kind)) {
                p->kids.push_back(parse_union());
                p->has_right = true;
            }
            return p;
        }
        if (k == Tok::DirLL || k == Tok::DirLS || k == Tok::DirRL || k == Tok::DirRS) {
            const Token& op = take();
            Direction dir = (k == Tok::DirLL || k == Tok::DirLS) ? Direction::LeftToRight
                                                                 : Direction::RightToLeft;
            LengthMode len = (k == Tok::DirLL || k == Tok::DirRL) ? LengthMode::Longest
                                                                  : LengthMode::Shortest;
            // empty PREFIX/SUFFIX are allowed around `...`, as in `@-> ... M`
            AstPtr first = peek().kind == Tok::Ellipsis ? mk(AstKind::EmptyStringLang, op)
                                                        : parse_union();
            AstPtr node;
            if (peek().kind == Tok::Ellipsis) {
                take();
                AstPtr suffix = starts_term(peek().kind) ? parse_union()
                                                         : mk(AstKind::EmptyStringLang, op);
                node = mk(AstKind::MarkupReplace, op);
                node->kids.push_back(std::move(upper));
                node->kids.push_back(std::move(first));
                node->kids.push_back(std::move(suffix));
            } else {
                node = mk(AstKind::DirectedReplace, op);
                node->kids.push_back(std::move(upper));
                node->kids.push_back(std::move(first));
            }
            node->direction = dir;
            node->length = len;
            return node;
        }
        return upper;
    }

    AstPtr parse_union() {
        AstPtr a = parse_diff();
        while (peek().kind == Tok::Pipe) {
            take();
            a = mk2(AstKind::Union, std::move(a), parse_diff());
        }
        return a;
    }

    AstPtr parse_diff() {
        AstPtr a = parse_concat();
        for (;;) {
            if (peek().kind == Tok::Minus) {
                take();
                a = mk2(AstKind::Minus, std::move(a), parse_concat());
            } else if (peek().kind == Tok::Amp) {
                take();
                a = mk2(AstKind::Intersect, std::move(a), parse_concat());
            } else {
                return a;
            }
        }
    }

    AstPtr parse_concat() {
        AstPtr a = parse_prefix();
        while (starts_term(peek().kind))
            a = mk2(AstKind::Concat, std::move(a), parse_prefix());
        return a;
    }

    AstPtr parse_prefix() {
        if (peek().kind == Tok::Tilde) {
            const Token& op = take();
            auto p = mk(AstKind::Complement, op);
            p->kids.push_back(parse_prefix());
            return p;
        }
        if (peek().kind == Tok::Dollar) {
            const Token& op = take();
            auto p = mk(AstKind::Contains, op);
            p->kids.push_back(parse_prefix());
            return p;
        }
        return parse_ignore();
    }

    AstPtr parse_ignore() {
        AstPtr a = parse_postfix();
        while (peek().kind == Tok::Slash) {
            take();
            a = mk2(AstKind::Ignore, std::move(a), parse_postfix());
        }
        return a;
    }

    AstPtr parse_postfix() {
        AstPtr a = parse_atom();
        for (;;) {
            Tok k = peek().kind;
            if (k == Tok::Star) {
                const Token& op = take();
                auto p = mk(AstKind::Star, op);
                p->kids.push_back(std::move(a));
                a = std::move(p);
            } else if (k == Tok::Plus) {
                const Token& op = take();
                auto p = mk(AstKind::Plus, op);
                p->kids.push_back(std::move(a));
                a = std::move(p);
            } else if (k == Tok::Colon) {
                take();
                AstPtr b = parse_atom();
                if (!pair_side(*a) || !pair_side(*b))
                    fail("':' joins single symbols, 0, or ?", peek());
                a = mk2(AstKind::Pair, std::move(a), std::move(b));
            } else {
                return a;
            }
        }
    }

    static bool pair_side(const Ast& a) {
        return a.kind == AstKind::Symbol || a.kind == AstKind::EmptyStringLang ||
               a.kind == AstKind::Any;
    }

    AstPtr parse_atom() {
        const Token& tk = peek();
        switch (tk.kind) {
            case Tok::Symbol: {
                take();
                auto p = mk(AstKind::Symbol, tk);
                p->name = tk.text;
                return p;
            }
            case Tok::NameRef: {
                take();
                auto p = mk(AstKind::NameRef, tk);
                p->name = tk.text;
                return p;
            }
            case Tok::Epsilon: {
                take();
                return mk(AstKind::EmptyStringLang, tk);
            }
            case Tok::Any: {
                take();
                return mk(AstKind::Any, tk);
            }
            case Tok::Boundary: {
                take();
                return mk(AstKind::Boundary, tk);
            }
            case Tok::LBrack: {
                take();
                if (peek().kind == Tok::RBrack) {
                    const Token& closing = take();
                    return mk(AstKind::EmptyStringLang, closing);
                }
                AstPtr inner = parse_expr();
                expect(Tok::RBrack, "']'");
                return inner;
            }
            case Tok::LParen: {
                const Token& op = take();
                AstPtr inner = parse_expr();
                expect(Tok::RParen, "')'");
                auto p = mk(AstKind::Optional, op);
                p->kids.push_back(std::move(inner));
                return p;
            }
            default:
                fail("expected an expression", tk);
        }
    }
};

}  // namespace detail

inline AstPtr parse(const std::vector<Token>& tokens) {
    detail::Parser p{tokens};
    AstPtr a = p.parse_expr();
    if (p.peek().kind != Tok::End)
        p.fail("trailing input after expression", p.peek());
    return a;
}

inline AstPtr parse(const std::string& src) { return parse(tokenize(src)); }

// ---------------------------------------------------------------------------
// Pretty printer (fully bracketed; reparses to an equal tree)

inline std::string pretty_print(const Ast& a) {
    auto quote = [](const std::string& s) {
        std::string out = "\"";
        for (char c : s) {
            if (c == '"' || c == '\\') out.push_back('\\');
            if (c == '\n') { out += "\\n"; continue; }
            if (c == '\t') { out += "\\t"; continue; }
            out.push_back(c);
        }
        out.push_back('"');
        return out;
    };
    auto kid = [&](std::size_t i) { return pretty_print(*a.kids[i]); };
    switch (a.kind) {
        case AstKind::Symbol: return quote(a.name);
        case AstKind::NameRef: return a.name;
        case AstKind::EmptyStringLang: return "[]";
        case AstKind::Any: return "?";
        case AstKind::Boundary: return ".#.";
        case AstKind::Pair: return "[" + kid(0) + ":" + kid(1) + "]";
        case AstKind::Union: return "[" + kid(0) + " | " + kid(1) + "]";
        case AstKind::Concat: return "[" + kid(0) + " " + kid(1) + "]";
        case AstKind::Intersect: return "[" + kid(0) + " & " + kid(1) + "]";
        case AstKind::Minus: return "[" + kid(0) + " - " + kid(1) + "]";
        case AstKind::Ignore: return "[" + kid(0) + " / " + kid(1) + "]";
        case AstKind::Contains: return "[$ " + kid(0) + "]";
        case AstKind::Complement: return "[~ " + kid(0) + "]";
        case AstKind::Star: return "[" + kid(0) + "]*";
        case AstKind::Plus: return "[" + kid(0) + "]+";
        case AstKind::Optional: return "(" + kid(0) + ")";
        case AstKind::Crossproduct: return "[" + kid(0) + " .x. " + kid(1) + "]";
        case AstKind::Compose: return "[" + kid(0) + " .o. " + kid(1) + "]";
        case AstKind::SimpleReplace: return "[" + kid(0) + " -> " + kid(1) + "]";
        case AstKind::ConditionalReplace: {
            std::string s = "[" + kid(0) + " -> " + kid(1) + " || ";
            std::size_t k = 2;
            if (a.has_left) s += kid(k++) + " ";
            s += "_";
            if (a.has_right) s += " " + kid(k);
            return s + "]";
        }
        case AstKind::DirectedReplace:
        case AstKind::MarkupReplace: {
            const char* op = a.direction == Direction::LeftToRight
                                 ? (a.length == LengthMode::Longest ? "@->" : "@>")
                                 : (a.length == LengthMode::Longest ? "->@" : ">@");
            std::string s = "[" + kid(0) + " " + op + " " + kid(1);
            if (a.kind == AstKind::MarkupReplace) s += " ... " + kid(2);
            return s + "]";
        }
        case AstKind::ParallelReplace: {
            std::string s = "[";
            for (std::size_t i = 0; i < a.kids.size(); ++i) {
                if (i) s += " , ";
                // strip one bracket level: each child prints bracketed already
                s += pretty_print(*a.kids[i]);
            }
            return s + "]";
        }
    }
    return "";
}

// ---------------------------------------------------------------------------
// Compiler

using Definitions = std::map<std::string, Network>;

inline Network compile(const Ast& a, const Definitions& defs, SymbolTable& table) {
    auto kid = [&](std::size_t i) { return compile(*a.kids[i], defs, table); };
    switch (a.kind) {
        case AstKind::Symbol: return atom(table.intern(a.name));
        case AstKind::NameRef: {
            auto it = defs.find(a.name);
            if (it == defs.end())
                throw Error(ErrorKind::UnknownName, "undefined name '" + a.name + "'",
                            a.line, a.column);
            return it->second;
        }
        case AstKind::EmptyStringLang: return empty_string_language();
        case AstKind::Any: return atom(OTHER);
        case AstKind::Boundary: return boundary_atom();
        case AstKind::Pair: {
            auto side = [&](const Ast& s) {
                if (s.kind == AstKind::EmptyStringLang) return EPSILON;
                if (s.kind == AstKind::Any) return UNKNOWN;
                return table.intern(s.name);
            };
            return atom(side(*a.kids[0]), side(*a.kids[1]));
        }
        case AstKind::Union: return minimize(union_net(kid(0), kid(1)));
        case AstKind::Concat: return minimize(concat(kid(0), kid(1)));
        case AstKind::Intersect: return intersect(kid(0), kid(1));
        case AstKind::Minus: return difference(kid(0), kid(1));
        case AstKind::Ignore: {
            Network what = kid(1);
            std::set<SymbolId> syms = what.sigma;
            syms.erase(OTHER);
            syms.erase(UNKNOWN);
            return minimize(ignore(kid(0), syms, IgnoreMode::Everywhere));
        }
        case AstKind::Contains: return minimize(contains(kid(0)));
        case AstKind::Complement: return complement(kid(0));
        case AstKind::Star: return minimize(star(kid(0)));
        case AstKind::Plus: return minimize(plus(kid(0)));
        case AstKind::Optional: return minimize(optional(kid(0)));
        case AstKind::Crossproduct: return minimize(crossproduct(kid(0), kid(1)));
        case AstKind::Compose: return minimize(compose(kid(0), kid(1)));
        case AstKind::SimpleReplace: return replace_simple(kid(0), kid(1));
        case AstKind::ConditionalReplace: {
            ContextSpec ctx;
            std::size_t k = 2;
            if (a.has_left) ctx.left = kid(k++);
            if (a.has_right) ctx.right = kid(k);
            return replace_conditional(kid(0), kid(1), ctx);
        }
        case AstKind::DirectedReplace: {
            ReplaceSpec spec{kid(0), LowerAction{kid(1)}, a.direction, a.length};
            return replace_directed(spec);
        }
        case AstKind::MarkupReplace: {
            ReplaceSpec spec{kid(0), MarkupAction{kid(1), kid(2)}, a.direction, a.length};
            return markup_directed(spec);
        }
        case AstKind::ParallelReplace: {
            std::vector<ReplaceSpec> rules;
            rules.reserve(a.kids.size());
            for (auto& r : a.kids) {
                Network upper = compile(*r->kids[0], defs, table);
                ReplaceAction act;
                if (r->kind == AstKind::DirectedReplace)
                    act = LowerAction{compile(*r->kids[1], defs, table)};
                else
                    act = MarkupAction{compile(*r->kids[1], defs, table),
                                       compile(*r->kids[2], defs, table)};
                rules.push_back(ReplaceSpec{std::move(upper), std::move(act),
                                            r->direction, r->length});
            }
            return replace_parallel_directed(rules);
        }
    }
    throw Error(ErrorKind::SyntaxError, "unreachable ast node");
}

// ---------------------------------------------------------------------------
// Rule files: `define NAME expr ;`* then one main expression `;`.

inline std::pair<Definitions, Network> load_program(const std::string& src,
                                                    SymbolTable& table) {
    std::vector<Token> tokens = tokenize(src);
    Definitions defs;
    detail::Parser p{tokens};
    std::optional<Network> main;
    while (p.peek().kind != Tok::End) {
        if (p.peek().kind == Tok::Define) {
            const Token& kw = p.take();
            if (p.peek().kind != Tok::NameRef && p.peek().kind != Tok::Symbol)
                p.fail("expected a name after 'define'", p.peek());
            const Token& nm = p.take();
            if (detail::codepoints(nm.text) < 2)
                throw Error(ErrorKind::SyntaxError,
                            "defined names need at least two characters", kw.line, kw.column);
            AstPtr body = p.parse_expr();
            p.expect(Tok::Semi, "';'");
            defs[nm.text] = compile(*body, defs, table);
            continue;
        }
        if (main)
            p.fail("only one main expression is allowed", p.peek());
        AstPtr body = p.parse_expr();
        p.expect(Tok::Semi, "';'");
        main = compile(*body, defs, table);
    }
    if (!main)
        throw Error(ErrorKind::SyntaxError, "program has no main expression", 1, 1);
    return {std::move(defs), std::move(*main)};
}

}  // namespace fsc

#endif
