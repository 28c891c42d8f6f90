#include "sdsim/parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <set>

#include "sdsim/errors.hpp"
#include "sdsim/format.hpp"

namespace sdsim {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t'; }

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && is_space(s[a])) ++a;
    while (b > a && is_space(s[b - 1])) --b;
    return s.substr(a, b - a);
}

// Names may wrap across lines, so runs of whitespace inside identifiers
// collapse to a single space.
std::string collapse_ws(const std::string& s) {
    std::string out;
    bool pending = false;
    for (char c : trim(s)) {
        if (is_space(c)) {
            pending = true;
            continue;
        }
        if (pending && !out.empty()) out += ' ';
        pending = false;
        out += c;
    }
    return out;
}

// --- expression tokens -----------------------------------------------------

struct Token {
    enum Kind { Num, Ident, Quoted, Plus, Minus, Star, Slash, LParen, RParen, Comma, End };
    Kind kind;
    std::string text;
    double value = 0.0;
};

// Returns a message on failure, empty string on success.
std::string lex_expr(const std::string& s, std::vector<Token>& out) {
    std::size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (is_space(c)) {
            ++i;
            continue;
        }
        Token::Kind simple = Token::End;
        switch (c) {
            case '+': simple = Token::Plus; break;
            case '-': simple = Token::Minus; break;
            case '*': simple = Token::Star; break;
            case '/': simple = Token::Slash; break;
            case '(': simple = Token::LParen; break;
            case ')': simple = Token::RParen; break;
            case ',': simple = Token::Comma; break;
            default: break;
        }
        if (simple != Token::End) {
            out.push_back({simple, {}, 0.0});
            ++i;
            continue;
        }
        if (c == '"') {
            auto close = s.find('"', i + 1);
            if (close == std::string::npos) return "unterminated quote";
            std::string name = s.substr(i + 1, close - i - 1);
            if (trim(name).empty()) return "empty quoted name";
            out.push_back({Token::Quoted, name, 0.0});
            i = close + 1;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            double v = 0.0;
            auto res = std::from_chars(s.data() + i, s.data() + s.size(), v);
            if (res.ec != std::errc{}) return "malformed number";
            out.push_back({Token::Num, {}, v});
            i = static_cast<std::size_t>(res.ptr - s.data());
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == ' ' || s[j] == '.')) {
                ++j;
            }
            out.push_back({Token::Ident, collapse_ws(s.substr(i, j - i)), 0.0});
            i = j;
            continue;
        }
        return std::string("unexpected character '") + c + "'";
    }
    out.push_back({Token::End, {}, 0.0});
    return {};
}

// --- recursive-descent expression parser -----------------------------------

struct ExprParser {
    const std::vector<Token>& t;
    std::size_t i = 0;
    std::string error;

    Token::Kind kind() const { return t[i].kind; }
    const Token& peek() const { return t[i]; }
    void next() {
        if (t[i].kind != Token::End) ++i;
    }
    ExprPtr fail(std::string msg) {
        if (error.empty()) error = std::move(msg);
        return nullptr;
    }

    ExprPtr parse() {
        auto e = parse_sum();
        if (!e) return nullptr;
        if (kind() != Token::End) return fail("unexpected trailing input");
        return e;
    }

    ExprPtr parse_sum() {
        auto l = parse_product();
        while (l && (kind() == Token::Plus || kind() == Token::Minus)) {
            auto op = kind() == Token::Plus ? BinaryOp::Add : BinaryOp::Sub;
            next();
            auto r = parse_product();
            if (!r) return nullptr;
            l = binary(op, std::move(l), std::move(r));
        }
        return l;
    }

    ExprPtr parse_product() {
        auto l = parse_factor();
        while (l && (kind() == Token::Star || kind() == Token::Slash)) {
            auto op = kind() == Token::Star ? BinaryOp::Mul : BinaryOp::Div;
            next();
            auto r = parse_factor();
            if (!r) return nullptr;
            l = binary(op, std::move(l), std::move(r));
        }
        return l;
    }

    ExprPtr parse_factor() {
        if (kind() == Token::Minus) {
            next();
            auto f = parse_factor();
            if (!f) return nullptr;
            return sub(num(0.0), std::move(f));
        }
        if (kind() == Token::Plus) {
            next();
            return parse_factor();
        }
        return parse_primary();
    }

    ExprPtr parse_primary() {
        switch (kind()) {
            case Token::Num: {
                double v = peek().value;
                next();
                return num(v);
            }
            case Token::Quoted: {
                std::string n = peek().text;
                next();
                return var(std::move(n));
            }
            case Token::Ident: {
                std::string n = peek().text;
                next();
                if (kind() == Token::LParen) return parse_call(n);
                return var(std::move(n));
            }
            case Token::LParen: {
                next();
                auto e = parse_sum();
                if (!e) return nullptr;
                if (kind() != Token::RParen) return fail("expected ')'");
                next();
                return e;
            }
            default: return fail("expected a value");
        }
    }

    ExprPtr parse_call(const std::string& name) {
        Func fn;
        if (name == "INTEG") fn = Func::Integ;
        else if (name == "MAX") fn = Func::Max;
        else if (name == "MIN") fn = Func::Min;
        else if (name == "RANDOM NORMAL") fn = Func::RandomNormal;
        else return fail("unknown function: " + name);
        next();  // consume '('
        std::vector<ExprPtr> args;
        if (kind() != Token::RParen) {
            while (true) {
                auto a = parse_sum();
                if (!a) return nullptr;
                args.push_back(std::move(a));
                if (kind() == Token::Comma) {
                    next();
                    continue;
                }
                break;
            }
        }
        if (kind() != Token::RParen) return fail("expected ')' after arguments");
        next();
        if (static_cast<int>(args.size()) != arity(fn)) {
            return fail(std::string(func_name(fn)) + " expects " + std::to_string(arity(fn)) +
                        " arguments, got " + std::to_string(args.size()));
        }
        return call(fn, std::move(args));
    }
};

// --- entry headers ---------------------------------------------------------

struct HeaderScan {
    bool is_header = false;
    bool open_quote = false;  // line ends inside a quote and has no '='
    std::optional<int> index;
    std::string name;
    std::string rest;
    std::string error;
};

HeaderScan scan_header(const std::string& line) {
    HeaderScan h;
    bool in_q = false;
    std::size_t eq = std::string::npos;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_q = !in_q;
        else if (line[i] == '=' && !in_q) {
            eq = i;
            break;
        }
    }
    if (eq == std::string::npos) {
        h.open_quote = in_q;
        return h;
    }
    h.is_header = true;
    std::string lhs = line.substr(0, eq);
    h.rest = line.substr(eq + 1);

    std::size_t i = 0;
    while (i < lhs.size() && is_space(lhs[i])) ++i;
    if (i < lhs.size() && lhs[i] == '(') {
        std::size_t j = i + 1;
        int val = 0;
        bool digits = false;
        while (j < lhs.size() && std::isdigit(static_cast<unsigned char>(lhs[j]))) {
            val = val * 10 + (lhs[j] - '0');
            digits = true;
            ++j;
        }
        if (digits && j < lhs.size() && lhs[j] == ')') {
            h.index = val;
            i = j + 1;
        }
    }
    std::string t = trim(lhs.substr(i));
    if (t.empty()) {
        h.error = "missing variable name";
        return h;
    }
    if (t.front() == '"') {
        auto close = t.find('"', 1);
        if (close == std::string::npos) {
            h.error = "unterminated quote";
            return h;
        }
        h.name = t.substr(1, close - 1);
        if (h.name.empty()) h.error = "empty quoted name";
        else if (!trim(t.substr(close + 1)).empty()) h.error = "unexpected text after quoted name";
    } else {
        h.name = collapse_ws(t);
    }
    return h;
}

bool parse_bound(const std::string& raw, std::optional<double>& out) {
    std::string t = trim(raw);
    if (t == "?") {
        out.reset();
        return true;
    }
    double v = 0.0;
    auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc{} || res.ptr != t.data() + t.size()) return false;
    out = v;
    return true;
}

std::optional<ValueRange> parse_range(const std::string& raw) {
    std::string t = trim(raw);
    if (t.size() < 3 || t.front() != '[' || t.back() != ']') return std::nullopt;
    std::string body = t.substr(1, t.size() - 2);
    auto comma = body.find(',');
    if (comma == std::string::npos) return std::nullopt;
    ValueRange r;
    if (!parse_bound(body.substr(0, comma), r.lo)) return std::nullopt;
    if (!parse_bound(body.substr(comma + 1), r.hi)) return std::nullopt;
    return r;
}

// --- unit expressions ------------------------------------------------------

struct UnitParser {
    const std::string& s;
    std::size_t i = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw InvalidParameter("units: " + what + " in \"" + s + "\"");
    }
    void skip() {
        while (i < s.size() && is_space(s[i])) ++i;
    }

    UnitExpr term() {
        skip();
        if (i >= s.size()) fail("unexpected end of input");
        char c = s[i];
        if (c == '(') {
            ++i;
            UnitExpr u = chain();
            skip();
            if (i >= s.size() || s[i] != ')') fail("expected ')'");
            ++i;
            return u;
        }
        if (c == '1' &&
            (i + 1 >= s.size() || !std::isalnum(static_cast<unsigned char>(s[i + 1])))) {
            ++i;
            return UnitExpr::dimensionless();
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < s.size() && std::isalnum(static_cast<unsigned char>(s[j]))) ++j;
            std::string name = s.substr(i, j - i);
            i = j;
            if (name == "Dmnl") return UnitExpr::dimensionless();
            return UnitExpr::base(name);
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    UnitExpr chain() {
        UnitExpr u = term();
        while (true) {
            skip();
            if (i < s.size() && s[i] == '*') {
                ++i;
                u = u * term();
            } else if (i < s.size() && s[i] == '/') {
                ++i;
                u = u / term();
            } else {
                break;
            }
        }
        return u;
    }
};

}  // namespace

UnitExpr parse_units(const std::string& raw) {
    UnitParser p{raw};
    UnitExpr u = p.chain();
    p.skip();
    if (p.i < raw.size()) {
        throw InvalidParameter("units: unexpected trailing '" + raw.substr(p.i) + "' in \"" + raw +
                               "\"");
    }
    return u;
}

bool ParseResult::has_errors() const {
    return std::any_of(diagnostics.begin(), diagnostics.end(),
                       [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

ParseResult parse_model(const std::string& source) {
    ParseResult out;
    auto& diags = out.diagnostics;

    std::vector<std::string> lines;
    {
        std::string cur;
        for (char c : source) {
            if (c == '\n') {
                lines.push_back(cur);
                cur.clear();
            } else if (c != '\r') {
                cur += c;
            }
        }
        if (!cur.empty()) lines.push_back(cur);
    }

    auto err = [&](std::string msg, LineSpan span) {
        diags.push_back({Severity::Error, std::move(msg), span});
    };

    // Group lines into entries: header, expression continuation up to the
    // Units line, then doc lines until a blank line or the next header.
    enum class St { Idle, Expr, Doc };
    St st = St::Idle;
    SourceEntry cur;
    std::vector<SourceEntry>& entries = out.entries;

    auto finish = [&]() {
        entries.push_back(cur);
        cur = SourceEntry{};
    };

    for (int ln = 1; ln <= static_cast<int>(lines.size()); ++ln) {
        std::string t = trim(lines[ln - 1]);
        if (t.empty()) {
            if (st == St::Doc) {
                finish();
                st = St::Idle;
            }
            continue;
        }
        if (t.rfind("Units:", 0) == 0) {
            if (st == St::Expr) {
                std::string body = trim(t.substr(6));
                auto br = body.find('[');
                if (br != std::string::npos) {
                    cur.raw_range = trim(body.substr(br));
                    body = trim(body.substr(0, br));
                }
                cur.raw_units = body;
                cur.span.last = ln;
                if (body.empty()) err(cur.name + ": missing units expression", {ln, ln});
                st = St::Doc;
            } else {
                err("Units line outside an entry", {ln, ln});
            }
            continue;
        }
        HeaderScan h = scan_header(lines[ln - 1]);
        if (h.is_header) {
            if (st == St::Expr) err(cur.name + ": missing Units line", cur.span);
            else if (st == St::Doc) finish();
            st = St::Idle;
            if (!h.error.empty()) {
                err(h.error, {ln, ln});
                continue;
            }
            cur = SourceEntry{};
            cur.index = h.index;
            cur.name = h.name;
            cur.raw_expr = trim(h.rest);
            cur.span = {ln, ln};
            st = St::Expr;
            continue;
        }
        if (st == St::Expr) {
            if (!cur.raw_expr.empty()) cur.raw_expr += ' ';
            cur.raw_expr += t;
            cur.span.last = ln;
        } else if (st == St::Doc) {
            if (cur.comment) *cur.comment += "\n" + t;
            else cur.comment = t;
            cur.span.last = ln;
        } else {
            err(h.open_quote ? "unterminated quote" : "expected an equation", {ln, ln});
        }
    }
    if (st == St::Expr) err(cur.name + ": missing Units line", cur.span);
    else if (st == St::Doc) finish();

    if (entries.empty()) diags.push_back({Severity::Warning, "no entries", {0, 0}});

    // Entries to definitions.
    ModelSpec spec;
    std::set<std::string> seen;
    for (const auto& e : entries) {
        LineSpan span = e.span;
        if (!seen.insert(e.name).second) {
            err("duplicate name: " + e.name, span);
            continue;
        }
        std::vector<Token> toks;
        std::string lex_err = lex_expr(e.raw_expr, toks);
        if (!lex_err.empty()) {
            err(e.name + ": " + lex_err, span);
            continue;
        }
        ExprParser p{toks};
        ExprPtr ex = p.parse();
        if (!ex) {
            err(e.name + ": " + p.error, span);
            continue;
        }
        UnitExpr u;
        try {
            u = parse_units(e.raw_units);
        } catch (const SdError& se) {
            err(e.name + ": " + se.what(), span);
            continue;
        }
        std::optional<ValueRange> range;
        if (e.raw_range) {
            auto pr = parse_range(*e.raw_range);
            if (!pr) {
                err(e.name + ": malformed range " + *e.raw_range, span);
                continue;
            }
            range = *pr;
        }
        VariableDef v;
        v.name = e.name;
        v.kind = classify(e.name, *ex);
        v.expr = std::move(ex);
        v.units = u;
        v.range = range;
        v.doc = e.comment;
        v.index = e.index;
        v.span = span;
        spec.variables.push_back(std::move(v));
    }

    // Control entries feed SimControl; SAVEPER tracks TIME STEP unless given
    // its own literal.
    for (const auto& v : spec.variables) {
        if (v.kind != VarKind::Control) continue;
        LineSpan span = v.span.value_or(LineSpan{});
        const auto* n = std::get_if<Expr::Number>(&v.expr->node);
        if (v.name == "SAVEPER") {
            const auto* r = std::get_if<Expr::Var>(&v.expr->node);
            if (r && r->name == "TIME STEP") {
                spec.control.saveper_tracks_dt = true;
            } else if (n) {
                spec.control.saveper = n->value;
                spec.control.saveper_tracks_dt = false;
            } else {
                err("SAVEPER must be a literal or TIME STEP", span);
            }
            continue;
        }
        if (!n) {
            err(v.name + ": control entries take literal values", span);
            continue;
        }
        if (v.name == "INITIAL TIME") spec.control.initial_time = n->value;
        else if (v.name == "FINAL TIME") spec.control.final_time = n->value;
        else spec.control.dt = n->value;
    }
    if (spec.control.saveper_tracks_dt) spec.control.saveper = spec.control.dt;

    if (!out.has_errors()) out.spec = std::move(spec);
    return out;
}

std::string name_token(const std::string& name) {
    bool need = !name.empty() && std::isdigit(static_cast<unsigned char>(name.front()));
    for (char c : name) {
        if (c == '&' || c == ',' || c == '(' || c == ')' || c == '/' || c == '.') need = true;
    }
    return need ? '"' + name + '"' : name;
}

namespace {

int prec(const Expr& e) {
    if (const auto* b = std::get_if<Expr::Binary>(&e.node)) {
        return (b->op == BinaryOp::Add || b->op == BinaryOp::Sub) ? 1 : 2;
    }
    return 3;
}

void print_expr(const Expr& e, std::string& out) {
    if (const auto* n = std::get_if<Expr::Number>(&e.node)) {
        out += format_double(n->value);
        return;
    }
    if (const auto* v = std::get_if<Expr::Var>(&e.node)) {
        out += name_token(v->name);
        return;
    }
    if (const auto* b = std::get_if<Expr::Binary>(&e.node)) {
        int p = prec(e);
        // Right children at equal precedence keep their parentheses so the
        // printed text reparses to the identical tree.
        bool lp = prec(*b->left) < p;
        bool rp = prec(*b->right) <= p;
        if (lp) out += '(';
        print_expr(*b->left, out);
        if (lp) out += ')';
        switch (b->op) {
            case BinaryOp::Add: out += '+'; break;
            case BinaryOp::Sub: out += '-'; break;
            case BinaryOp::Mul: out += '*'; break;
            case BinaryOp::Div: out += '/'; break;
        }
        if (rp) out += '(';
        print_expr(*b->right, out);
        if (rp) out += ')';
        return;
    }
    const auto& c = std::get<Expr::Call>(e.node);
    out += func_name(c.fn);
    out += '(';
    for (std::size_t i = 0; i < c.args.size(); ++i) {
        if (i) out += ',';
        print_expr(*c.args[i], out);
    }
    out += ')';
}

}  // namespace

std::string expr_text(const Expr& e) {
    std::string s;
    print_expr(e, s);
    return s;
}

std::string serialize(const ModelSpec& spec) {
    std::string out;
    char head[16];
    int i = 0;
    for (const auto& v : spec.variables) {
        std::snprintf(head, sizeof head, "(%02d) ", ++i);
        out += head;
        out += name_token(v.name);
        out += "= ";
        out += expr_text(*v.expr);
        out += "\nUnits: ";
        out += v.units.str();
        if (v.range) {
            out += " [";
            out += v.range->lo ? format_double(*v.range->lo) : std::string("?");
            out += ',';
            out += v.range->hi ? format_double(*v.range->hi) : std::string("?");
            out += ']';
        }
        out += '\n';
        if (v.doc) {
            out += *v.doc;
            out += '\n';
        }
        out += '\n';
    }
    return out;
}

}  // namespace sdsim
