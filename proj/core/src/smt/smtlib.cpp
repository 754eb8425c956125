// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0

#include "symx/smt/smtlib.hpp"

#include "symx/error.hpp"

#include <unordered_map>

namespace symx::smt
{
namespace
{
class Lexer
{
public:
    explicit Lexer(std::string_view text) : text_{text} {}

    std::vector<SExpr> all()
    {
        std::vector<SExpr> out;
        skip_space();
        while (pos_ < text_.size())
        {
            out.push_back(parse());
            skip_space();
        }
        return out;
    }

private:
    void skip_space()
    {
        while (pos_ < text_.size())
        {
            const char c = text_[pos_];
            if (c == ';')
            {
                while (pos_ < text_.size() && text_[pos_] != '\n')
                    ++pos_;
            }
            else if (c == ' ' || c == '\n' || c == '\t' || c == '\r')
                ++pos_;
            else
                break;
        }
    }

    SExpr parse()
    {
        skip_space();
        if (pos_ >= text_.size())
            throw ParseError("unexpected end of SMT-LIB input");
        const char c = text_[pos_];
        if (c == '(')
        {
            ++pos_;
            std::vector<SExpr> items;
            for (;;)
            {
                skip_space();
                if (pos_ >= text_.size())
                    throw ParseError("unbalanced parenthesis");
                if (text_[pos_] == ')')
                {
                    ++pos_;
                    return SExpr{std::move(items)};
                }
                items.push_back(parse());
            }
        }
        if (c == ')')
            throw ParseError("unexpected ')'");
        if (c == '|' || c == '"')
        {
            const std::size_t start = pos_++;
            while (pos_ < text_.size() && text_[pos_] != c)
                ++pos_;
            if (pos_ >= text_.size())
                throw ParseError("unterminated quoted token");
            ++pos_;
            std::string tok{text_.substr(start, pos_ - start)};
            if (c == '|')
                tok = tok.substr(1, tok.size() - 2);
            return SExpr{std::move(tok)};
        }
        const std::size_t start = pos_;
        while (pos_ < text_.size())
        {
            const char d = text_[pos_];
            if (d == '(' || d == ')' || d == ' ' || d == '\n' || d == '\t' || d == '\r' || d == ';')
                break;
            ++pos_;
        }
        return SExpr{std::string{text_.substr(start, pos_ - start)}};
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

unsigned to_unsigned(const SExpr& s)
{
    if (!s.is_atom())
        throw ParseError("expected a numeral");
    try
    {
        return static_cast<unsigned>(std::stoul(s.atom()));
    }
    catch (const std::exception&)
    {
        throw ParseError("expected a numeral, got " + s.atom());
    }
}

Sort parse_sort(const SExpr& s)
{
    if (s.is_atom("Bool"))
        return Sort::boolean();
    if (!s.is_atom())
    {
        const auto& l = s.list();
        if (l.size() == 3 && l[0].is_atom("_") && l[1].is_atom("BitVec"))
            return Sort::bitvec(to_unsigned(l[2]));
        if (l.size() == 3 && l[0].is_atom("Array"))
        {
            const Sort i = parse_sort(l[1]);
            const Sort v = parse_sort(l[2]);
            return Sort::array(i.width(), v.width());
        }
    }
    throw ParseError("unsupported sort");
}

std::optional<Op> op_from_name(std::string_view name)
{
    static const auto table = [] {
        std::unordered_map<std::string_view, Op> t;
        for (std::size_t i = 0; i < kOpCount; ++i)
            t.emplace(op_name(static_cast<Op>(i)), static_cast<Op>(i));
        return t;
    }();
    auto it = table.find(name);
    if (it == table.end())
        return std::nullopt;
    return it->second;
}

unsigned literal_width(const std::string& a)
{
    if (a.starts_with("#x"))
        return static_cast<unsigned>(4 * (a.size() - 2));
    if (a.starts_with("#b"))
        return static_cast<unsigned>(a.size() - 2);
    return 0;
}

class TermParser
{
public:
    explicit TermParser(const Declarations& decls) : decls_{decls} {}

    Expr term(const SExpr& s)
    {
        if (s.is_atom())
            return atom(s.atom());
        const auto& l = s.list();
        if (l.empty())
            throw ParseError("empty application");
        const SExpr& head = l[0];

        if (head.is_atom("let"))
            return let(l);

        if (head.is_atom("_"))
        {
            // (_ bvN w)
            if (l.size() == 3 && l[1].is_atom() && l[1].atom().starts_with("bv"))
                return Expr::constant(Word(l[1].atom().substr(2)), to_unsigned(l[2]));
            throw ParseError("unsupported indexed term");
        }

        if (!head.is_atom())
        {
            const auto& h = head.list();
            // ((as const (Array ..)) v)
            if (h.size() == 3 && h[0].is_atom("as") && h[1].is_atom("const"))
            {
                const Sort sort = parse_sort(h[2]);
                return Expr::const_array(sort, parse_value(l.at(1)));
            }
            // ((_ extract hi lo) x), ((_ zero_extend n) x), ((_ sign_extend n) x)
            if (h.size() >= 3 && h[0].is_atom("_") && h[1].is_atom())
            {
                const auto op = op_from_name(h[1].atom());
                if (!op || l.size() != 2)
                    throw ParseError("unsupported indexed operator");
                std::array<unsigned, 2> params{to_unsigned(h[2]), h.size() > 3 ? to_unsigned(h[3]) : 0};
                return Expr::raw(*op, {term(l[1])}, params);
            }
            throw ParseError("unsupported application head");
        }

        const auto op = op_from_name(head.atom());
        if (!op)
            throw ParseError("unknown function symbol: " + head.atom());
        std::vector<Expr> args;
        for (std::size_t i = 1; i < l.size(); ++i)
            args.push_back(term(l[i]));
        // n-ary and/or/= from external producers fold to binary nodes.
        if ((*op == Op::And || *op == Op::Or) && args.size() > 2)
        {
            Expr acc = args[0];
            for (std::size_t i = 1; i < args.size(); ++i)
                acc = Expr::raw(*op, {acc, args[i]});
            return acc;
        }
        return Expr::raw(*op, std::move(args));
    }

private:
    Expr atom(const std::string& a)
    {
        if (a == "true")
            return Expr::boolean(true);
        if (a == "false")
            return Expr::boolean(false);
        if (const unsigned w = literal_width(a); w > 0)
            return Expr::constant(parse_value(SExpr{a}), w);
        for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it)
            if (auto f = it->find(a); f != it->end())
                return f->second;
        if (auto d = decls_.find(a); d != decls_.end())
            return Expr::variable(a, d->second);
        throw ParseError("undeclared symbol: " + a);
    }

    Expr let(const std::vector<SExpr>& l)
    {
        if (l.size() != 3 || l[1].is_atom())
            throw ParseError("malformed let");
        std::map<std::string, Expr> scope;
        for (const auto& binding : l[1].list())
        {
            const auto& b = binding.list();
            if (b.size() != 2 || !b[0].is_atom())
                throw ParseError("malformed let binding");
            scope.emplace(b[0].atom(), term(b[1]));
        }
        scopes_.push_back(std::move(scope));
        Expr body = term(l[2]);
        scopes_.pop_back();
        return body;
    }

    const Declarations& decls_;
    std::vector<std::map<std::string, Expr>> scopes_;
};

class TermPrinter
{
public:
    std::string print(const Expr& root)
    {
        count_parents(root);
        std::string body;
        emit(root, body, true);
        std::string out;
        for (const auto& [name, text] : bindings_)
            out += "(let ((" + name + " " + text + ")) ";
        out += body;
        out.append(bindings_.size(), ')');
        return out;
    }

private:
    void count_parents(const Expr& root)
    {
        std::vector<const Expr*> work{&root};
        while (!work.empty())
        {
            const Expr* x = work.back();
            work.pop_back();
            if (++parents_[x->id()] > 1 || !x->is_operation())
                continue;
            for (const auto& o : x->operands())
                work.push_back(&o);
        }
    }

    void emit(const Expr& e, std::string& out, bool is_root = false)
    {
        if (!e.is_operation())
        {
            out += e.is_variable() ? e.name() : literal_to_smtlib(e);
            return;
        }
        if (!is_root && parents_[e.id()] > 1)
        {
            if (auto it = names_.find(e.id()); it != names_.end())
            {
                out += it->second;
                return;
            }
            std::string text;
            emit_application(e, text);
            std::string name = "_let_" + std::to_string(bindings_.size());
            names_.emplace(e.id(), name);
            bindings_.emplace_back(name, std::move(text));
            out += name;
            return;
        }
        emit_application(e, out);
    }

    void emit_application(const Expr& e, std::string& out)
    {
        out += '(';
        switch (e.op())
        {
        case Op::Extract:
            out += "(_ extract " + std::to_string(e.param(0)) + " " + std::to_string(e.param(1)) + ")";
            break;
        case Op::ZeroExtend:
        case Op::SignExtend:
            out += "(_ " + std::string(op_name(e.op())) + " " + std::to_string(e.param(0)) + ")";
            break;
        default:
            out += op_name(e.op());
        }
        for (const auto& o : e.operands())
        {
            out += ' ';
            emit(o, out);
        }
        out += ')';
    }

    std::unordered_map<const Node*, unsigned> parents_;
    std::unordered_map<const Node*, std::string> names_;
    std::vector<std::pair<std::string, std::string>> bindings_;
};
}  // namespace

std::vector<SExpr> parse_sexprs(std::string_view text)
{
    return Lexer{text}.all();
}

std::string literal_to_smtlib(const Expr& c)
{
    const Sort& s = c.sort();
    if (s.is_bool())
        return c.value() != 0 ? "true" : "false";
    if (s.is_array())
    {
        const unsigned vw = s.value_width();
        return "((as const " + s.to_smtlib() + ") " + literal_to_smtlib(Expr::constant(c.value(), vw)) + ")";
    }
    const unsigned w = s.width();
    if (w % 4 == 0)
        return "#x" + to_hex(c.value(), w / 4);
    std::string bits(w, '0');
    for (unsigned i = 0; i < w; ++i)
        if (boost::multiprecision::bit_test(c.value(), i))
            bits[w - 1 - i] = '1';
    return "#b" + bits;
}

std::string term_to_smtlib(const Expr& e)
{
    return TermPrinter{}.print(e);
}

std::string declaration_to_smtlib(const std::string& name, const Sort& sort)
{
    return "(declare-fun " + name + " () " + sort.to_smtlib() + ")";
}

std::string to_smtlib(const ConstraintSet& cs, const std::optional<Expr>& extra, std::string_view logic)
{
    auto decls = cs.declarations();
    if (extra)
        collect_variables(*extra, decls);
    std::string out = "(set-logic " + std::string(logic) + ")\n";
    for (const auto& [name, sort] : decls)
        out += declaration_to_smtlib(name, sort) + "\n";
    for (const auto& a : cs.assertions())
        out += "(assert " + term_to_smtlib(a) + ")\n";
    if (extra)
        out += "(assert " + term_to_smtlib(*extra) + ")\n";
    out += "(check-sat)\n";
    return out;
}

Expr parse_term(const SExpr& s, const Declarations& decls)
{
    return TermParser{decls}.term(s);
}

Word parse_value(const SExpr& s)
{
    if (s.is_atom())
    {
        const auto& a = s.atom();
        if (a == "true")
            return 1;
        if (a == "false")
            return 0;
        if (a.starts_with("#x"))
            return from_hex(a.substr(2));
        if (a.starts_with("#b"))
        {
            Word v = 0;
            for (char c : a.substr(2))
            {
                if (c != '0' && c != '1')
                    throw ParseError("bad binary literal " + a);
                v = (v << 1) | (c == '1' ? 1 : 0);
            }
            return v;
        }
    }
    else
    {
        const auto& l = s.list();
        if (l.size() == 3 && l[0].is_atom("_") && l[1].is_atom() && l[1].atom().starts_with("bv"))
            return Word(l[1].atom().substr(2));
    }
    throw ParseError("unsupported value literal");
}

ConstraintSet parse_script(std::string_view text)
{
    ConstraintSet cs;
    Declarations decls;
    for (const auto& cmd : parse_sexprs(text))
    {
        if (cmd.is_atom() || cmd.list().empty())
            throw ParseError("expected a command");
        const auto& l = cmd.list();
        const auto& head = l[0];
        if (head.is_atom("declare-fun"))
        {
            if (l.size() != 4 || !l[1].is_atom() || l[2].is_atom() || !l[2].list().empty())
                throw ParseError("only nullary declare-fun is supported");
            const Sort sort = parse_sort(l[3]);
            decls.emplace(l[1].atom(), sort);
            cs.declare(Expr::variable(l[1].atom(), sort));
        }
        else if (head.is_atom("assert"))
            cs.add(parse_term(l.at(1), decls));
        else if (head.is_atom("set-logic") || head.is_atom("set-option") || head.is_atom("check-sat")
            || head.is_atom("get-value") || head.is_atom("push") || head.is_atom("pop") || head.is_atom("exit")
            || head.is_atom("get-model"))
            continue;
        else
            throw ParseError("unsupported command");
    }
    return cs;
}

}  // namespace symx::smt
