#include "pcs/expr.hpp"

#include <cctype>

#include "pcs/error.hpp"

namespace pcs {

Expr Expr::constant(bool value) {
    Expr e;
    e.kind_ = Kind::constant;
    e.value_ = value;
    return e;
}

Expr Expr::atom(std::string name) {
    Expr e;
    e.kind_ = Kind::atom;
    e.name_ = std::move(name);
    return e;
}

Expr Expr::negation(Expr operand) {
    Expr e;
    e.kind_ = Kind::negation;
    e.operands_.push_back(std::move(operand));
    return e;
}

static std::vector<Expr> flatten(Expr::Kind kind, std::vector<Expr> operands) {
    std::vector<Expr> flat;
    flat.reserve(operands.size());
    for (Expr& op : operands) {
        if (op.kind() == kind) {
            for (const Expr& child : op.operands()) flat.push_back(child);
        } else {
            flat.push_back(std::move(op));
        }
    }
    return flat;
}

Expr Expr::conjunction(std::vector<Expr> operands) {
    if (operands.empty()) throw StructuralError("conjunction needs at least one operand");
    std::vector<Expr> flat = flatten(Kind::conjunction, std::move(operands));
    if (flat.size() == 1) return std::move(flat.front());
    Expr e;
    e.kind_ = Kind::conjunction;
    e.operands_ = std::move(flat);
    return e;
}

Expr Expr::disjunction(std::vector<Expr> operands) {
    if (operands.empty()) throw StructuralError("disjunction needs at least one operand");
    std::vector<Expr> flat = flatten(Kind::disjunction, std::move(operands));
    if (flat.size() == 1) return std::move(flat.front());
    Expr e;
    e.kind_ = Kind::disjunction;
    e.operands_ = std::move(flat);
    return e;
}

void Expr::collect_atoms(std::set<std::string>& into) const {
    if (kind_ == Kind::atom) {
        into.insert(name_);
        return;
    }
    for (const Expr& op : operands_) op.collect_atoms(into);
}

namespace {

struct Lexer {
    std::string_view text;
    std::size_t pos = 0;

    void skip_space() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool eof() {
        skip_space();
        return pos >= text.size();
    }

    char peek() {
        skip_space();
        return pos < text.size() ? text[pos] : '\0';
    }

    bool consume(std::string_view token) {
        skip_space();
        if (text.substr(pos, token.size()) == token) {
            pos += token.size();
            return true;
        }
        return false;
    }

    static bool ident_start(char c) {
        return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
    }
    static bool ident_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    }

    std::string identifier() {
        skip_space();
        std::size_t start = pos;
        while (pos < text.size() && ident_char(text[pos])) ++pos;
        return std::string(text.substr(start, pos - start));
    }

    [[noreturn]] void fail(const std::string& what) {
        throw ParseError("formula parse error at offset " + std::to_string(pos) + ": " + what +
                         " in '" + std::string(text) + "'");
    }
};

// Grammar: or := and ('||' and)* ; and := unary ('&&' unary)* ;
// unary := '!' unary | primary ; primary := '(' or ')' | defined | atom | int
struct Parser {
    Lexer lex;

    Expr parse() {
        Expr e = parse_or();
        if (!lex.eof()) lex.fail("trailing input");
        return e;
    }

    Expr parse_or() {
        std::vector<Expr> parts;
        parts.push_back(parse_and());
        while (lex.consume("||")) parts.push_back(parse_and());
        return Expr::disjunction(std::move(parts));
    }

    Expr parse_and() {
        std::vector<Expr> parts;
        parts.push_back(parse_unary());
        while (true) {
            lex.skip_space();
            // a lone '&' or '|' is bitwise arithmetic, not parseable
            if (lex.text.substr(lex.pos, 2) == "&&") {
                lex.pos += 2;
                parts.push_back(parse_unary());
            } else {
                break;
            }
        }
        return Expr::conjunction(std::move(parts));
    }

    Expr parse_unary() {
        lex.skip_space();
        if (lex.peek() == '!' && lex.text.substr(lex.pos, 2) != "!=") {
            ++lex.pos;
            return Expr::negation(parse_unary());
        }
        return parse_primary();
    }

    Expr parse_primary() {
        char c = lex.peek();
        if (c == '(') {
            ++lex.pos;
            Expr inner = parse_or();
            if (!lex.consume(")")) lex.fail("expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = lex.pos;
            while (lex.pos < lex.text.size() &&
                   (std::isalnum(static_cast<unsigned char>(lex.text[lex.pos])) ||
                    lex.text[lex.pos] == '.'))
                ++lex.pos;
            std::string token(lex.text.substr(start, lex.pos - start));
            for (char d : token) {
                if (!std::isdigit(static_cast<unsigned char>(d))) lex.fail("non-integer literal");
            }
            return Expr::constant(token.find_first_not_of('0') != std::string::npos);
        }
        if (Lexer::ident_start(c)) {
            std::string name = lex.identifier();
            if (name == "defined") {
                bool parens = lex.consume("(");
                lex.skip_space();
                if (!Lexer::ident_start(lex.peek())) lex.fail("expected identifier after 'defined'");
                std::string atom = lex.identifier();
                if (parens && !lex.consume(")")) lex.fail("expected ')' after defined(...)");
                return Expr::atom(std::move(atom));
            }
            // A following '(' would be a function-like macro invocation.
            if (lex.peek() == '(') lex.fail("function-like macro invocation");
            return Expr::atom(std::move(name));
        }
        lex.fail("unexpected token");
    }
};

int precedence(Expr::Kind kind) {
    switch (kind) {
    case Expr::Kind::disjunction: return 1;
    case Expr::Kind::conjunction: return 2;
    default: return 3;
    }
}

void render(const Expr& expr, std::string& out) {
    switch (expr.kind()) {
    case Expr::Kind::constant:
        out += expr.value() ? '1' : '0';
        return;
    case Expr::Kind::atom:
        out += expr.name();
        return;
    case Expr::Kind::negation: {
        out += '!';
        const Expr& op = expr.operands().front();
        bool parens = precedence(op.kind()) < 3;
        if (parens) out += '(';
        render(op, out);
        if (parens) out += ')';
        return;
    }
    case Expr::Kind::conjunction:
    case Expr::Kind::disjunction: {
        const char* sep = expr.kind() == Expr::Kind::conjunction ? " && " : " || ";
        int prec = precedence(expr.kind());
        bool first = true;
        for (const Expr& op : expr.operands()) {
            if (!first) out += sep;
            first = false;
            bool parens = precedence(op.kind()) < prec;
            if (parens) out += '(';
            render(op, out);
            if (parens) out += ')';
        }
        return;
    }
    }
}

} // namespace

Expr parse_formula(std::string_view text) {
    Parser parser{Lexer{text}};
    if (parser.lex.eof()) parser.lex.fail("empty formula");
    return parser.parse();
}

std::string to_string(const Expr& expr) {
    std::string out;
    render(expr, out);
    return out;
}

} // namespace pcs
