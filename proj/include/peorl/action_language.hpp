#pragma once

// Action descriptions: a small causal-law language with five law kinds
// (static, dynamic, nonexecutable, inertial, default) over declared finite
// sorts, multi-valued fluents and actions. Text form is dot-terminated
// statements with % line comments; see docs/domain-format.md for the grammar.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace peorl {

struct SourcePos {
    int line = 0;  // 1-based; 0 when the node was built programmatically
    int col = 0;
};

struct Diagnostic {
    SourcePos pos;
    std::string message;
};

std::string format_diagnostics(const std::vector<Diagnostic>& diags);

// A sort element or a concrete term value.
struct Constant {
    enum class Kind { Int, Sym, Bool };
    Kind kind = Kind::Sym;
    long long num = 0;
    bool flag = false;
    std::string sym;

    static Constant integer(long long v) {
        Constant c; c.kind = Kind::Int; c.num = v; return c;
    }
    static Constant symbol(std::string s) {
        Constant c; c.kind = Kind::Sym; c.sym = std::move(s); return c;
    }
    static Constant boolean(bool b) {
        Constant c; c.kind = Kind::Bool; c.flag = b; return c;
    }

    bool operator==(const Constant& o) const {
        if (kind != o.kind) return false;
        switch (kind) {
            case Kind::Int: return num == o.num;
            case Kind::Sym: return sym == o.sym;
            case Kind::Bool: return flag == o.flag;
        }
        return false;
    }
    bool operator<(const Constant& o) const;
    std::string to_string() const;
};

// An argument or value position inside an atom: either a constant or a
// variable with an optional integer offset (Y, Y+1, Y-2).
struct Term {
    enum class Kind { Const, Var };
    Kind kind = Kind::Const;
    Constant value;
    std::string var;
    long long offset = 0;

    static Term constant(Constant c) {
        Term t; t.kind = Kind::Const; t.value = std::move(c); return t;
    }
    static Term variable(std::string name, long long off = 0) {
        Term t; t.kind = Kind::Var; t.var = std::move(name); t.offset = off; return t;
    }

    bool is_var() const { return kind == Kind::Var; }
    bool operator==(const Term& o) const {
        if (kind != o.kind) return false;
        if (kind == Kind::Const) return value == o.value;
        return var == o.var && offset == o.offset;
    }
    std::string to_string() const;
};

// f(t1,...,tn) = v. Boolean fluents use the f / ~f shorthand, stored as a
// Bool constant value.
struct FluentAtom {
    std::string fluent;
    std::vector<Term> args;
    Term value = Term::constant(Constant::boolean(true));
    SourcePos pos;

    bool operator==(const FluentAtom& o) const {
        return fluent == o.fluent && args == o.args && value == o.value;
    }
    std::string to_string() const;
};

struct ActionTerm {
    std::string name;
    std::vector<Term> args;
    SourcePos pos;

    bool operator==(const ActionTerm& o) const { return name == o.name && args == o.args; }
    std::string to_string() const;
};

struct CausalLaw {
    enum class Kind { Static, Dynamic, Nonexecutable, Inertial, Default };
    Kind kind = Kind::Static;
    std::optional<FluentAtom> head;      // Static, Dynamic, Default
    std::optional<ActionTerm> action;    // Dynamic, Nonexecutable
    std::vector<FluentAtom> body;
    std::string inertial_fluent;         // Inertial: all instances of this fluent
    SourcePos pos;

    bool operator==(const CausalLaw& o) const {
        return kind == o.kind && head == o.head && action == o.action && body == o.body &&
               inertial_fluent == o.inertial_fluent;
    }
    std::string to_string() const;
};

struct SortDecl {
    std::string name;
    std::vector<Constant> elements;
    bool is_range = false;  // printed as lo..hi when true
    long long lo = 0, hi = 0;
    SourcePos pos;

    bool operator==(const SortDecl& o) const {
        return name == o.name && elements == o.elements && is_range == o.is_range &&
               (!is_range || (lo == o.lo && hi == o.hi));
    }
};

struct FluentDecl {
    std::string name;
    std::vector<std::string> arg_sorts;
    std::string value_sort;  // empty = boolean
    SourcePos pos;

    bool is_boolean() const { return value_sort.empty(); }
    bool operator==(const FluentDecl& o) const {
        return name == o.name && arg_sorts == o.arg_sorts && value_sort == o.value_sort;
    }
};

struct ActionDecl {
    std::string name;
    std::vector<std::string> arg_sorts;
    SourcePos pos;

    bool operator==(const ActionDecl& o) const {
        return name == o.name && arg_sorts == o.arg_sorts;
    }
};

struct ActionDescription {
    std::vector<SortDecl> sorts;
    std::vector<FluentDecl> fluents;
    std::vector<ActionDecl> actions;
    std::vector<CausalLaw> laws;

    const SortDecl* find_sort(std::string_view name) const;
    const FluentDecl* find_fluent(std::string_view name) const;
    const ActionDecl* find_action(std::string_view name) const;

    bool operator==(const ActionDescription& o) const {
        return sorts == o.sorts && fluents == o.fluents && actions == o.actions && laws == o.laws;
    }
};

struct ParseResult {
    std::optional<ActionDescription> description;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return description.has_value() && diagnostics.empty(); }
};

// Parses a complete domain file. On success the AST is returned with no
// diagnostics; on failure `description` is empty and diagnostics carry
// line/column positions. Symbol resolution (undeclared names, arity
// mismatches) is reported here as well.
ParseResult parse_action_description(std::string_view text);

// Semantic checks over an already well-formed AST: declarations consistent,
// law heads safe, at most one default per ground atom, literal terms inside
// their sorts. Returns one diagnostic per violation; empty means valid.
std::vector<Diagnostic> validate(const ActionDescription& desc);

// Canonical text form; parse(pretty_print(d)) is structurally equal to d and
// pretty_print is a fixed point over its own output.
std::string pretty_print(const ActionDescription& desc);

// Comma-separated atom list ("pos(9,8), ~dooractive"); used for CLI --init
// and --goal values. Diagnostics are appended on error.
std::vector<FluentAtom> parse_fluent_atoms(std::string_view text, std::vector<Diagnostic>& diags);

}  // namespace peorl
