#include "peorl/action_language.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace peorl {

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_variable_name(std::string_view s) { return !s.empty() && std::isupper(static_cast<unsigned char>(s[0])); }

struct Token {
    enum class Kind { Ident, Int, Punct, End };
    Kind kind = Kind::End;
    std::string text;
    long long num = 0;
    SourcePos pos;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) { advance(); }

    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        skip_ws_and_comments();
        tok_.pos = {line_, col_};
        if (i_ >= src_.size()) {
            tok_.kind = Token::Kind::End;
            tok_.text.clear();
            return;
        }
        char c = src_[i_];
        if (is_ident_start(c)) {
            size_t start = i_;
            while (i_ < src_.size() && is_ident_char(src_[i_])) bump();
            tok_.kind = Token::Kind::Ident;
            tok_.text.assign(src_.substr(start, i_ - start));
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = i_;
            while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) bump();
            tok_.kind = Token::Kind::Int;
            tok_.text.assign(src_.substr(start, i_ - start));
            tok_.num = std::stoll(tok_.text);
            return;
        }
        // ".." is one token; everything else is single-char punctuation.
        if (c == '.' && i_ + 1 < src_.size() && src_[i_ + 1] == '.') {
            tok_.kind = Token::Kind::Punct;
            tok_.text = "..";
            bump();
            bump();
            return;
        }
        tok_.kind = Token::Kind::Punct;
        tok_.text.assign(1, c);
        bump();
    }

    void skip_ws_and_comments() {
        for (;;) {
            while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) bump();
            if (i_ < src_.size() && src_[i_] == '%') {
                while (i_ < src_.size() && src_[i_] != '\n') bump();
                continue;
            }
            break;
        }
    }

    void bump() {
        if (src_[i_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++i_;
    }

    std::string_view src_;
    size_t i_ = 0;
    int line_ = 1, col_ = 1;
    Token tok_;
};

class ParseError {};  // thrown to unwind to statement recovery

class Parser {
public:
    Parser(std::string_view text, std::vector<Diagnostic>& diags) : lex_(text), diags_(diags) {}

    ActionDescription parse_file() {
        ActionDescription desc;
        while (lex_.peek().kind != Token::Kind::End) {
            try {
                parse_statement(desc);
            } catch (const ParseError&) {
                recover_to_dot();
            }
        }
        return desc;
    }

    FluentAtom parse_single_atom() { return parse_atom(); }

    bool at_end() const { return lex_.peek().kind == Token::Kind::End; }
    bool try_eat_punct(const std::string& p) {
        if (lex_.peek().kind == Token::Kind::Punct && lex_.peek().text == p) {
            lex_.take();
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const Token& at, const std::string& expected) {
        std::string got = at.kind == Token::Kind::End ? "end of input" : "'" + at.text + "'";
        error(at.pos, "expected " + expected + ", found " + got);
        throw ParseError{};
    }

private:
    void parse_statement(ActionDescription& desc) {
        const Token& t = lex_.peek();
        if (t.kind == Token::Kind::Punct && t.text == "~") {
            desc.laws.push_back(parse_law());
            return;
        }
        if (t.kind != Token::Kind::Ident) fail(t, "a declaration or causal law");
        if (t.text == "sort") {
            desc.sorts.push_back(parse_sort());
        } else if (t.text == "fluent") {
            desc.fluents.push_back(parse_fluent_decl());
        } else if (t.text == "action") {
            desc.actions.push_back(parse_action_decl());
        } else {
            desc.laws.push_back(parse_law());
        }
    }

    SortDecl parse_sort() {
        SortDecl s;
        s.pos = lex_.peek().pos;
        lex_.take();  // sort
        s.name = expect_ident("sort name");
        expect_punct("=");
        if (lex_.peek().kind == Token::Kind::Punct && lex_.peek().text == "{") {
            lex_.take();
            for (;;) {
                s.elements.push_back(parse_constant());
                if (try_eat_punct("}")) break;
                expect_punct(",");
            }
        } else {
            Token lo = lex_.take();
            long long lov = token_to_int(lo);
            expect_punct("..");
            Token hi = lex_.take();
            long long hiv = token_to_int(hi);
            if (hiv < lov) {
                error(lo.pos, "empty range " + std::to_string(lov) + ".." + std::to_string(hiv));
                throw ParseError{};
            }
            s.is_range = true;
            s.lo = lov;
            s.hi = hiv;
            for (long long v = lov; v <= hiv; ++v) s.elements.push_back(Constant::integer(v));
        }
        expect_punct(".");
        return s;
    }

    FluentDecl parse_fluent_decl() {
        FluentDecl f;
        f.pos = lex_.peek().pos;
        lex_.take();  // fluent
        f.name = expect_ident("fluent name");
        if (try_eat_punct("(")) {
            for (;;) {
                f.arg_sorts.push_back(expect_ident("sort name"));
                if (try_eat_punct(")")) break;
                expect_punct(",");
            }
        }
        if (try_eat_punct(":")) f.value_sort = expect_ident("value sort name");
        expect_punct(".");
        return f;
    }

    ActionDecl parse_action_decl() {
        ActionDecl a;
        a.pos = lex_.peek().pos;
        lex_.take();  // action
        a.name = expect_ident("action name");
        if (try_eat_punct("(")) {
            for (;;) {
                a.arg_sorts.push_back(expect_ident("sort name"));
                if (try_eat_punct(")")) break;
                expect_punct(",");
            }
        }
        expect_punct(".");
        return a;
    }

    CausalLaw parse_law() {
        CausalLaw law;
        law.pos = lex_.peek().pos;
        const std::string& kw = lex_.peek().text;
        if (kw == "inertial") {
            lex_.take();
            law.kind = CausalLaw::Kind::Inertial;
            law.inertial_fluent = expect_ident("fluent name");
            expect_punct(".");
            return law;
        }
        if (kw == "default") {
            lex_.take();
            law.kind = CausalLaw::Kind::Default;
            law.head = parse_atom();
            expect_punct(".");
            return law;
        }
        if (kw == "nonexecutable") {
            lex_.take();
            law.kind = CausalLaw::Kind::Nonexecutable;
            law.action = parse_action_term();
            if (eat_keyword("if")) law.body = parse_atom_seq();
            expect_punct(".");
            return law;
        }
        // Either "a causes A0 [if ...]" or a static law "A if A1,...".
        // Both start with name[(terms)]; disambiguate on the next keyword.
        if (lex_.peek().kind == Token::Kind::Punct && lex_.peek().text == "~") {
            // A negated head can only open a static law.
            law.kind = CausalLaw::Kind::Static;
            law.head = parse_atom();
            if (!eat_keyword("if")) fail(lex_.peek(), "'if'");
            law.body = parse_atom_seq();
            expect_punct(".");
            return law;
        }
        Token head_tok = lex_.peek();
        std::string name = expect_ident("law head");
        std::vector<Term> args;
        if (lex_.peek().kind == Token::Kind::Punct && lex_.peek().text == "(") parse_term_list(args);
        if (lex_.peek().kind == Token::Kind::Ident && lex_.peek().text == "causes") {
            lex_.take();
            law.kind = CausalLaw::Kind::Dynamic;
            ActionTerm at;
            at.name = std::move(name);
            at.args = std::move(args);
            at.pos = head_tok.pos;
            law.action = std::move(at);
            law.head = parse_atom();
            if (eat_keyword("if")) law.body = parse_atom_seq();
            expect_punct(".");
            return law;
        }
        law.kind = CausalLaw::Kind::Static;
        law.head = finish_atom(std::move(name), std::move(args), head_tok.pos, false);
        if (!eat_keyword("if")) fail(lex_.peek(), "'if' or 'causes'");
        law.body = parse_atom_seq();
        expect_punct(".");
        return law;
    }

    std::vector<FluentAtom> parse_atom_seq() {
        std::vector<FluentAtom> atoms;
        atoms.push_back(parse_atom());
        while (try_eat_punct(",")) atoms.push_back(parse_atom());
        return atoms;
    }

    FluentAtom parse_atom() {
        bool negated = try_eat_punct("~");
        Token t = lex_.peek();
        std::string name = expect_ident("fluent name");
        std::vector<Term> args;
        if (lex_.peek().kind == Token::Kind::Punct && lex_.peek().text == "(") parse_term_list(args);
        return finish_atom(std::move(name), std::move(args), t.pos, negated);
    }

    FluentAtom finish_atom(std::string name, std::vector<Term> args, SourcePos pos, bool negated) {
        FluentAtom atom;
        atom.fluent = std::move(name);
        atom.args = std::move(args);
        atom.pos = pos;
        if (lex_.peek().kind == Token::Kind::Punct && lex_.peek().text == "=") {
            if (negated) fail(lex_.peek(), "no '=' after '~' (negation is boolean shorthand)");
            lex_.take();
            atom.value = parse_term();
        } else {
            atom.value = Term::constant(Constant::boolean(!negated));
        }
        return atom;
    }

    ActionTerm parse_action_term() {
        ActionTerm at;
        at.pos = lex_.peek().pos;
        at.name = expect_ident("action name");
        if (lex_.peek().kind == Token::Kind::Punct && lex_.peek().text == "(") parse_term_list(at.args);
        return at;
    }

    void parse_term_list(std::vector<Term>& out) {
        expect_punct("(");
        for (;;) {
            out.push_back(parse_term());
            if (try_eat_punct(")")) break;
            expect_punct(",");
        }
    }

    Term parse_term() {
        Token t = lex_.peek();
        if (t.kind == Token::Kind::Int) {
            lex_.take();
            return Term::constant(Constant::integer(t.num));
        }
        if (t.kind == Token::Kind::Punct && t.text == "-") {
            lex_.take();
            Token n = lex_.take();
            return Term::constant(Constant::integer(-token_to_int(n)));
        }
        if (t.kind != Token::Kind::Ident) fail(t, "a term");
        lex_.take();
        if (t.text == "true") return Term::constant(Constant::boolean(true));
        if (t.text == "false") return Term::constant(Constant::boolean(false));
        if (is_variable_name(t.text)) {
            long long off = 0;
            if (lex_.peek().kind == Token::Kind::Punct &&
                (lex_.peek().text == "+" || lex_.peek().text == "-")) {
                bool neg = lex_.take().text == "-";
                Token k = lex_.take();
                off = token_to_int(k);
                if (neg) off = -off;
            }
            return Term::variable(t.text, off);
        }
        return Term::constant(Constant::symbol(t.text));
    }

    Constant parse_constant() {
        Token t = lex_.peek();
        if (t.kind == Token::Kind::Int) {
            lex_.take();
            return Constant::integer(t.num);
        }
        if (t.kind == Token::Kind::Punct && t.text == "-") {
            lex_.take();
            Token n = lex_.take();
            return Constant::integer(-token_to_int(n));
        }
        if (t.kind == Token::Kind::Ident && !is_variable_name(t.text)) {
            lex_.take();
            return Constant::symbol(t.text);
        }
        fail(t, "a constant (integer or lowercase symbol)");
    }

    long long token_to_int(const Token& t) {
        if (t.kind != Token::Kind::Int) fail(t, "an integer");
        return t.num;
    }

    std::string expect_ident(const std::string& what) {
        const Token& t = lex_.peek();
        if (t.kind != Token::Kind::Ident) fail(t, what);
        return lex_.take().text;
    }

    void expect_punct(const std::string& p) {
        const Token& t = lex_.peek();
        if (t.kind != Token::Kind::Punct || t.text != p) fail(t, "'" + p + "'");
        lex_.take();
    }

    bool eat_keyword(const std::string& kw) {
        if (lex_.peek().kind == Token::Kind::Ident && lex_.peek().text == kw) {
            lex_.take();
            return true;
        }
        return false;
    }

    void recover_to_dot() {
        while (lex_.peek().kind != Token::Kind::End) {
            Token t = lex_.take();
            if (t.kind == Token::Kind::Punct && t.text == ".") return;
        }
    }

    void error(SourcePos pos, std::string msg) { diags_.push_back({pos, std::move(msg)}); }

    Lexer lex_;
    std::vector<Diagnostic>& diags_;
};

// ---------------------------------------------------------------------------
// Symbol resolution and semantic checks.

struct SymbolTables {
    std::unordered_map<std::string, const SortDecl*> sorts;
    std::unordered_map<std::string, const FluentDecl*> fluents;
    std::unordered_map<std::string, const ActionDecl*> actions;
};

SymbolTables build_tables(const ActionDescription& desc, std::vector<Diagnostic>& diags) {
    SymbolTables t;
    for (const auto& s : desc.sorts) {
        if (!t.sorts.emplace(s.name, &s).second)
            diags.push_back({s.pos, "duplicate sort declaration '" + s.name + "'"});
    }
    for (const auto& f : desc.fluents) {
        if (!t.fluents.emplace(f.name, &f).second)
            diags.push_back({f.pos, "duplicate fluent declaration '" + f.name + "'"});
        if (t.sorts.count(f.name) || t.actions.count(f.name))
            diags.push_back({f.pos, "'" + f.name + "' already declared with a different role"});
    }
    for (const auto& a : desc.actions) {
        if (!t.actions.emplace(a.name, &a).second)
            diags.push_back({a.pos, "duplicate action declaration '" + a.name + "'"});
        if (t.fluents.count(a.name))
            diags.push_back({a.pos, "'" + a.name + "' already declared as a fluent"});
    }
    return t;
}

void check_decl_sorts(const SymbolTables& t, const std::vector<std::string>& sorts,
                      const std::string& owner, SourcePos pos, std::vector<Diagnostic>& diags) {
    for (const auto& s : sorts) {
        if (!t.sorts.count(s))
            diags.push_back({pos, "undeclared sort '" + s + "' in declaration of '" + owner + "'"});
    }
}

bool constant_in_sort(const Constant& c, const SortDecl& s) {
    return std::find(s.elements.begin(), s.elements.end(), c) != s.elements.end();
}

// Checks one atom: fluent declared, arity matches, literal args/value inside
// their sorts. Collects variables with the sort of the position they occupy.
void check_atom(const SymbolTables& t, const FluentAtom& atom,
                std::map<std::string, std::set<std::string>>* var_sorts,
                std::vector<Diagnostic>& diags) {
    auto it = t.fluents.find(atom.fluent);
    if (it == t.fluents.end()) {
        diags.push_back({atom.pos, "undeclared fluent '" + atom.fluent + "'"});
        return;
    }
    const FluentDecl& decl = *it->second;
    if (atom.args.size() != decl.arg_sorts.size()) {
        diags.push_back({atom.pos, "fluent '" + atom.fluent + "' expects " +
                                       std::to_string(decl.arg_sorts.size()) + " argument(s), got " +
                                       std::to_string(atom.args.size())});
        return;
    }
    for (size_t i = 0; i < atom.args.size(); ++i) {
        const Term& arg = atom.args[i];
        auto sit = t.sorts.find(decl.arg_sorts[i]);
        if (sit == t.sorts.end()) continue;  // reported against the declaration
        if (arg.is_var()) {
            if (var_sorts && arg.offset == 0) (*var_sorts)[arg.var].insert(decl.arg_sorts[i]);
        } else if (!constant_in_sort(arg.value, *sit->second)) {
            diags.push_back({atom.pos, "'" + arg.value.to_string() + "' is not in sort '" +
                                           decl.arg_sorts[i] + "'"});
        }
    }
    const Term& v = atom.value;
    if (decl.is_boolean()) {
        if (!(v.kind == Term::Kind::Const && v.value.kind == Constant::Kind::Bool))
            diags.push_back({atom.pos, "boolean fluent '" + atom.fluent + "' takes no '=' value"});
    } else {
        auto sit = t.sorts.find(decl.value_sort);
        if (v.kind == Term::Kind::Const && v.value.kind == Constant::Kind::Bool) {
            diags.push_back({atom.pos, "fluent '" + atom.fluent + "' needs an explicit '=' value"});
        } else if (v.is_var()) {
            if (var_sorts && v.offset == 0) (*var_sorts)[v.var].insert(decl.value_sort);
        } else if (sit != t.sorts.end() && !constant_in_sort(v.value, *sit->second)) {
            diags.push_back(
                {atom.pos, "'" + v.value.to_string() + "' is not in sort '" + decl.value_sort + "'"});
        }
    }
}

void check_action_term(const SymbolTables& t, const ActionTerm& at,
                       std::map<std::string, std::set<std::string>>* var_sorts,
                       std::vector<Diagnostic>& diags) {
    auto it = t.actions.find(at.name);
    if (it == t.actions.end()) {
        diags.push_back({at.pos, "undeclared action '" + at.name + "'"});
        return;
    }
    const ActionDecl& decl = *it->second;
    if (at.args.size() != decl.arg_sorts.size()) {
        diags.push_back({at.pos, "action '" + at.name + "' expects " +
                                     std::to_string(decl.arg_sorts.size()) + " argument(s), got " +
                                     std::to_string(at.args.size())});
        return;
    }
    for (size_t i = 0; i < at.args.size(); ++i) {
        const Term& arg = at.args[i];
        auto sit = t.sorts.find(decl.arg_sorts[i]);
        if (sit == t.sorts.end()) continue;
        if (arg.is_var()) {
            if (var_sorts && arg.offset == 0) (*var_sorts)[arg.var].insert(decl.arg_sorts[i]);
        } else if (!constant_in_sort(arg.value, *sit->second)) {
            diags.push_back({at.pos, "'" + arg.value.to_string() + "' is not in sort '" +
                                         decl.arg_sorts[i] + "'"});
        }
    }
}

void collect_vars(const FluentAtom& atom, std::set<std::string>& out) {
    for (const auto& a : atom.args)
        if (a.is_var()) out.insert(a.var);
    if (atom.value.is_var()) out.insert(atom.value.var);
}

// Expands a (possibly schematic) default head into ground text keys.
std::vector<std::string> ground_head_keys(const FluentAtom& head, const FluentDecl& decl,
                                          const SymbolTables& t);

void check_laws(const ActionDescription& desc, const SymbolTables& t,
                std::vector<Diagnostic>& diags) {
    // Ground default heads, to enforce at most one default per ground atom.
    // Key: fluent name + ground argument tuple (rendered as text).
    std::unordered_map<std::string, SourcePos> default_heads;

    for (const auto& law : desc.laws) {
        std::map<std::string, std::set<std::string>> body_vars_sorts;
        std::set<std::string> bound;

        switch (law.kind) {
            case CausalLaw::Kind::Inertial: {
                if (!t.fluents.count(law.inertial_fluent))
                    diags.push_back(
                        {law.pos, "undeclared fluent '" + law.inertial_fluent + "' in inertial law"});
                continue;
            }
            case CausalLaw::Kind::Default: {
                check_atom(t, *law.head, &body_vars_sorts, diags);
                // Schematic defaults are allowed; expand ground instances to
                // detect overlapping defaults.
                auto fit = t.fluents.find(law.head->fluent);
                if (fit == t.fluents.end()) continue;
                std::vector<std::string> keys = ground_head_keys(*law.head, *fit->second, t);
                for (auto& k : keys) {
                    auto [it, inserted] = default_heads.emplace(k, law.pos);
                    if (!inserted)
                        diags.push_back({law.pos, "more than one default law for '" + k + "'"});
                }
                continue;
            }
            case CausalLaw::Kind::Dynamic:
                check_action_term(t, *law.action, &body_vars_sorts, diags);
                for (const auto& a : law.action->args)
                    if (a.is_var()) bound.insert(a.var);
                break;
            case CausalLaw::Kind::Nonexecutable:
                check_action_term(t, *law.action, &body_vars_sorts, diags);
                break;
            case CausalLaw::Kind::Static:
                break;
        }

        for (const auto& atom : law.body) {
            check_atom(t, atom, &body_vars_sorts, diags);
            collect_vars(atom, bound);
        }
        if (law.head) {
            check_atom(t, *law.head, &body_vars_sorts, diags);
            std::set<std::string> head_vars;
            collect_vars(*law.head, head_vars);
            for (const auto& v : head_vars) {
                if (!bound.count(v))
                    diags.push_back({law.pos, "unsafe variable '" + v + "' in law head"});
            }
        }
        // Every variable needs at least one plain (offset-free) occurrence to
        // pin down its sort, and occurrences must agree.
        std::set<std::string> all_vars = bound;
        if (law.head) collect_vars(*law.head, all_vars);
        for (const auto& v : all_vars) {
            auto it = body_vars_sorts.find(v);
            if (it == body_vars_sorts.end() || it->second.empty()) {
                diags.push_back({law.pos, "cannot infer a sort for variable '" + v + "'"});
            } else if (it->second.size() > 1) {
                std::string sorts;
                for (const auto& s : it->second) sorts += (sorts.empty() ? "" : ", ") + s;
                diags.push_back({law.pos, "variable '" + v + "' used at positions of different sorts (" +
                                              sorts + ")"});
            }
        }
    }
}

std::vector<std::string> ground_head_keys(const FluentAtom& head, const FluentDecl& decl,
                                          const SymbolTables& t) {
    std::vector<std::string> keys{decl.name};
    if (!head.args.empty()) {
        std::vector<std::vector<std::string>> parts;
        for (size_t i = 0; i < head.args.size(); ++i) {
            std::vector<std::string> alt;
            if (head.args[i].is_var()) {
                auto sit = t.sorts.find(i < decl.arg_sorts.size() ? decl.arg_sorts[i] : "");
                if (sit == t.sorts.end()) return {};
                for (const auto& e : sit->second->elements) alt.push_back(e.to_string());
            } else {
                alt.push_back(head.args[i].value.to_string());
            }
            parts.push_back(std::move(alt));
        }
        std::vector<std::string> acc{""};
        for (size_t i = 0; i < parts.size(); ++i) {
            std::vector<std::string> next;
            for (const auto& prefix : acc)
                for (const auto& p : parts[i]) next.push_back(prefix + (i ? "," : "") + p);
            acc = std::move(next);
        }
        std::vector<std::string> out;
        for (const auto& argstr : acc) out.push_back(decl.name + "(" + argstr + ")");
        return out;
    }
    return keys;
}

void print_args(std::ostringstream& os, const std::vector<Term>& args) {
    if (args.empty()) return;
    os << "(";
    for (size_t i = 0; i < args.size(); ++i) {
        if (i) os << ",";
        os << args[i].to_string();
    }
    os << ")";
}

}  // namespace

std::string Constant::to_string() const {
    switch (kind) {
        case Kind::Int: return std::to_string(num);
        case Kind::Sym: return sym;
        case Kind::Bool: return flag ? "true" : "false";
    }
    return {};
}

bool Constant::operator<(const Constant& o) const {
    if (kind != o.kind) return static_cast<int>(kind) < static_cast<int>(o.kind);
    switch (kind) {
        case Kind::Int: return num < o.num;
        case Kind::Sym: return sym < o.sym;
        case Kind::Bool: return flag < o.flag;
    }
    return false;
}

std::string Term::to_string() const {
    if (kind == Kind::Const) return value.to_string();
    if (offset == 0) return var;
    if (offset > 0) return var + "+" + std::to_string(offset);
    return var + "-" + std::to_string(-offset);
}

std::string FluentAtom::to_string() const {
    std::ostringstream os;
    bool boolean = value.kind == Term::Kind::Const && value.value.kind == Constant::Kind::Bool;
    if (boolean && !value.value.flag) os << "~";
    os << fluent;
    print_args(os, args);
    if (!boolean) os << "=" << value.to_string();
    return os.str();
}

std::string ActionTerm::to_string() const {
    std::ostringstream os;
    os << name;
    print_args(os, args);
    return os.str();
}

std::string CausalLaw::to_string() const {
    std::ostringstream os;
    auto body_str = [&] {
        std::string b;
        for (size_t i = 0; i < body.size(); ++i) b += (i ? ", " : "") + body[i].to_string();
        return b;
    };
    switch (kind) {
        case Kind::Static:
            os << head->to_string() << " if " << body_str();
            break;
        case Kind::Dynamic:
            os << action->to_string() << " causes " << head->to_string();
            if (!body.empty()) os << " if " << body_str();
            break;
        case Kind::Nonexecutable:
            os << "nonexecutable " << action->to_string();
            if (!body.empty()) os << " if " << body_str();
            break;
        case Kind::Inertial:
            os << "inertial " << inertial_fluent;
            break;
        case Kind::Default:
            os << "default " << head->to_string();
            break;
    }
    os << ".";
    return os.str();
}

const SortDecl* ActionDescription::find_sort(std::string_view name) const {
    for (const auto& s : sorts)
        if (s.name == name) return &s;
    return nullptr;
}

const FluentDecl* ActionDescription::find_fluent(std::string_view name) const {
    for (const auto& f : fluents)
        if (f.name == name) return &f;
    return nullptr;
}

const ActionDecl* ActionDescription::find_action(std::string_view name) const {
    for (const auto& a : actions)
        if (a.name == name) return &a;
    return nullptr;
}

std::string format_diagnostics(const std::vector<Diagnostic>& diags) {
    std::ostringstream os;
    for (const auto& d : diags) os << d.pos.line << ":" << d.pos.col << ": " << d.message << "\n";
    return os.str();
}

ParseResult parse_action_description(std::string_view text) {
    ParseResult result;
    Parser parser(text, result.diagnostics);
    ActionDescription desc = parser.parse_file();
    if (result.diagnostics.empty()) {
        SymbolTables tables = build_tables(desc, result.diagnostics);
        for (const auto& f : desc.fluents)
            check_decl_sorts(tables, f.arg_sorts, f.name, f.pos, result.diagnostics);
        for (const auto& f : desc.fluents)
            if (!f.value_sort.empty() && !tables.sorts.count(f.value_sort))
                result.diagnostics.push_back(
                    {f.pos, "undeclared value sort '" + f.value_sort + "' for fluent '" + f.name + "'"});
        for (const auto& a : desc.actions)
            check_decl_sorts(tables, a.arg_sorts, a.name, a.pos, result.diagnostics);
        if (result.diagnostics.empty()) {
            // Symbol/arity resolution piggybacks on validate.
            auto sem = validate(desc);
            for (auto& d : sem) result.diagnostics.push_back(std::move(d));
        }
    }
    if (result.diagnostics.empty()) result.description = std::move(desc);
    return result;
}

std::vector<Diagnostic> validate(const ActionDescription& desc) {
    std::vector<Diagnostic> diags;
    SymbolTables tables = build_tables(desc, diags);

    for (const auto& s : desc.sorts) {
        if (s.elements.empty()) diags.push_back({s.pos, "sort '" + s.name + "' has an empty domain"});
        std::set<Constant> seen;
        for (const auto& e : s.elements)
            if (!seen.insert(e).second)
                diags.push_back({s.pos, "duplicate element '" + e.to_string() + "' in sort '" + s.name + "'"});
    }
    for (const auto& f : desc.fluents) {
        check_decl_sorts(tables, f.arg_sorts, f.name, f.pos, diags);
        if (!f.value_sort.empty() && !tables.sorts.count(f.value_sort))
            diags.push_back({f.pos, "undeclared value sort '" + f.value_sort + "' for fluent '" + f.name + "'"});
    }
    for (const auto& a : desc.actions) check_decl_sorts(tables, a.arg_sorts, a.name, a.pos, diags);

    check_laws(desc, tables, diags);
    return diags;
}

std::string pretty_print(const ActionDescription& desc) {
    std::ostringstream os;
    for (const auto& s : desc.sorts) {
        os << "sort " << s.name << " = ";
        if (s.is_range) {
            os << s.lo << ".." << s.hi;
        } else {
            os << "{";
            for (size_t i = 0; i < s.elements.size(); ++i)
                os << (i ? ", " : "") << s.elements[i].to_string();
            os << "}";
        }
        os << ".\n";
    }
    if (!desc.sorts.empty() && !desc.fluents.empty()) os << "\n";
    for (const auto& f : desc.fluents) {
        os << "fluent " << f.name;
        if (!f.arg_sorts.empty()) {
            os << "(";
            for (size_t i = 0; i < f.arg_sorts.size(); ++i) os << (i ? ", " : "") << f.arg_sorts[i];
            os << ")";
        }
        if (!f.value_sort.empty()) os << " : " << f.value_sort;
        os << ".\n";
    }
    if (!desc.actions.empty()) os << "\n";
    for (const auto& a : desc.actions) {
        os << "action " << a.name;
        if (!a.arg_sorts.empty()) {
            os << "(";
            for (size_t i = 0; i < a.arg_sorts.size(); ++i) os << (i ? ", " : "") << a.arg_sorts[i];
            os << ")";
        }
        os << ".\n";
    }
    if (!desc.laws.empty()) os << "\n";
    for (const auto& law : desc.laws) os << law.to_string() << "\n";
    return os.str();
}

std::vector<FluentAtom> parse_fluent_atoms(std::string_view text, std::vector<Diagnostic>& diags) {
    std::vector<FluentAtom> atoms;
    Parser parser(text, diags);
    try {
        if (parser.at_end()) return atoms;
        atoms.push_back(parser.parse_single_atom());
        while (!parser.at_end()) {
            if (!parser.try_eat_punct(",")) parser.fail({}, "','");
            atoms.push_back(parser.parse_single_atom());
        }
    } catch (const ParseError&) {
        atoms.clear();
    }
    return atoms;
}

}  // namespace peorl
