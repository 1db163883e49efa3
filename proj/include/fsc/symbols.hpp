#ifndef FSC_SYMBOLS_HPP
#define FSC_SYMBOLS_HPP

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <fsc/error.hpp>

namespace fsc {

// Handle into a SymbolTable. Two interned names are equal iff their ids are.
struct SymbolId {
    std::uint32_t raw = 0;
    friend auto operator<=>(SymbolId, SymbolId) = default;
};

// Reserved ids. None of these spellings can be produced from regex source,
// so auxiliary marks never collide with user symbols.
inline constexpr SymbolId EPSILON{0};   // the empty string, "0" in regex source
inline constexpr SymbolId OTHER{1};     // identity on any symbol outside sigma, "?"
inline constexpr SymbolId UNKNOWN{2};   // non-identity unknown, one side of a pair
inline constexpr SymbolId BOUNDARY{3};  // ".#.", context edge anchor
inline constexpr SymbolId CARET{4};     // match-start mark (internal)
inline constexpr SymbolId LBRACKET{5};  // selected-region open mark (internal)
inline constexpr SymbolId RBRACKET{6};  // selected-region close mark (internal)
inline constexpr std::uint32_t FIRST_USER_SYMBOL = 7;

class SymbolTable {
public:
    SymbolTable() {
        for (const char* name : {"@0@", "@?@", "@??@", "@#@", "@^@", "@<@", "@>@"}) {
            index_[name] = static_cast<std::uint32_t>(names_.size());
            names_.emplace_back(name);
        }
    }

    // Idempotent. Rejects empty and reserved spellings.
    SymbolId intern(std::string_view name) {
        if (name.empty())
            throw Error(ErrorKind::EmptyName, "cannot intern an empty symbol name");
        auto it = index_.find(std::string(name));
        if (it != index_.end()) {
            if (it->second < FIRST_USER_SYMBOL)
                throw Error(ErrorKind::ReservedName,
                            "symbol name '" + std::string(name) + "' is reserved");
            return SymbolId{it->second};
        }
        std::uint32_t id = static_cast<std::uint32_t>(names_.size());
        names_.emplace_back(name);
        index_.emplace(names_.back(), id);
        return SymbolId{id};
    }

    // Lookup that accepts reserved spellings; used when reading serialized nets.
    SymbolId intern_any(std::string_view name) {
        auto it = index_.find(std::string(name));
        if (it != index_.end()) return SymbolId{it->second};
        return intern(name);
    }

    const std::string& name(SymbolId id) const { return names_.at(id.raw); }

    bool contains(std::string_view name) const {
        return index_.count(std::string(name)) != 0;
    }

    std::size_t size() const { return names_.size(); }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, std::uint32_t> index_;
};

inline bool is_reserved(SymbolId s) { return s.raw < FIRST_USER_SYMBOL; }

}  // namespace fsc

template <>
struct std::hash<fsc::SymbolId> {
    std::size_t operator()(fsc::SymbolId s) const noexcept {
        return std::hash<std::uint32_t>{}(s.raw);
    }
};

#endif
