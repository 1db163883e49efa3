#ifndef FSC_ERROR_HPP
#define FSC_ERROR_HPP

#include <stdexcept>
#include <string>

namespace fsc {

enum class ErrorKind {
    EmptyName,
    ReservedName,
    NotAnAutomaton,
    EpsilonInUpper,
    EmptyRuleSet,
    UnterminatedQuote,
    DanglingEscape,
    SyntaxError,
    UnknownName,
    UnsupportedContextOrientation,
    AmbiguousOutput,
    ActionLanguageInfinite,
    BadArtifact,
    Io,
};

struct Error : std::runtime_error {
    ErrorKind kind;
    int line = 0;    // 1-based when known
    int column = 0;  // 1-based when known

    Error(ErrorKind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
    Error(ErrorKind k, const std::string& msg, int ln, int col)
        : std::runtime_error(msg), kind(k), line(ln), column(col) {}
};

}  // namespace fsc

#endif
