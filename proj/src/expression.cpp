#include "ati/expression.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace ati {

struct Expr::Node {
    Kind kind;
    double value = 0.0;
    int index = 0;
    int exponent = 0;
    std::vector<Expr> children;
};

namespace {

std::shared_ptr<const Expr::Node> makeNode(Expr::Kind kind, std::vector<Expr> children = {})
{
    auto node = std::make_shared<Expr::Node>();
    node->kind = kind;
    node->children = std::move(children);
    return node;
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) { }

    Expr parseAll()
    {
        Expr e = parseSum();
        skipSpace();
        if (pos_ != text_.size()) {
            fail("unexpected trailing input");
        }
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const
    {
        throw Error(ErrorCode::ParseError, msg + " at offset " + std::to_string(pos_) + " in '" + std::string(text_) + "'");
    }

    void skipSpace()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char c)
    {
        skipSpace();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Expr parseSum()
    {
        Expr lhs = parseProduct();
        for (;;) {
            if (accept('+')) {
                lhs = lhs + parseProduct();
            } else if (accept('-')) {
                lhs = lhs - parseProduct();
            } else {
                return lhs;
            }
        }
    }

    Expr parseProduct()
    {
        Expr lhs = parseUnary();
        while (accept('*')) {
            lhs = lhs * parseUnary();
        }
        return lhs;
    }

    Expr parseUnary()
    {
        if (accept('-')) {
            return -parseUnary();
        }
        if (accept('+')) {
            return parseUnary();
        }
        return parsePower();
    }

    Expr parsePower()
    {
        Expr base = parsePrimary();
        if (accept('^')) {
            skipSpace();
            const std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
            }
            if (start == pos_) {
                fail("expected a nonnegative integer exponent");
            }
            int k = 0;
            std::from_chars(text_.data() + start, text_.data() + pos_, k);
            return Expr::pow(base, k);
        }
        return base;
    }

    Expr parsePrimary()
    {
        skipSpace();
        if (pos_ >= text_.size()) {
            fail("unexpected end of expression");
        }
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = parseSum();
            if (!accept(')')) {
                fail("expected ')'");
            }
            return e;
        }
        if (c == 'x' || c == 'u') {
            ++pos_;
            const std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
            }
            if (start == pos_) {
                fail("variable needs a 1-based index, e.g. x1");
            }
            int idx = 0;
            std::from_chars(text_.data() + start, text_.data() + pos_, idx);
            if (idx < 1) {
                fail("variable indices start at 1");
            }
            return c == 'x' ? Expr::state(idx) : Expr::input(idx);
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const std::size_t start = pos_;
            while (pos_ < text_.size()
                && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.' || text_[pos_] == 'e'
                    || text_[pos_] == 'E'
                    || ((text_[pos_] == '-' || text_[pos_] == '+') && pos_ > start
                        && (text_[pos_ - 1] == 'e' || text_[pos_ - 1] == 'E')))) {
                ++pos_;
            }
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, v);
            if (ec != std::errc() || ptr != text_.data() + pos_) {
                fail("malformed number");
            }
            return Expr::constant(v);
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace

Expr Expr::constant(double v)
{
    auto node = std::make_shared<Node>();
    node->kind = Kind::Constant;
    node->value = v;
    return Expr(std::move(node));
}

Expr Expr::state(int index)
{
    auto node = std::make_shared<Node>();
    node->kind = Kind::State;
    node->index = index;
    return Expr(std::move(node));
}

Expr Expr::input(int index)
{
    auto node = std::make_shared<Node>();
    node->kind = Kind::Input;
    node->index = index;
    return Expr(std::move(node));
}

Expr Expr::pow(const Expr& base, int exponent)
{
    if (exponent < 0) {
        throw Error(ErrorCode::ParseError, "negative exponents are not supported");
    }
    auto node = std::make_shared<Node>();
    node->kind = Kind::Pow;
    node->exponent = exponent;
    node->children = {base};
    return Expr(std::move(node));
}

Expr operator+(const Expr& a, const Expr& b) { return Expr(makeNode(Expr::Kind::Add, {a, b})); }
Expr operator-(const Expr& a, const Expr& b) { return Expr(makeNode(Expr::Kind::Sub, {a, b})); }
Expr operator*(const Expr& a, const Expr& b) { return Expr(makeNode(Expr::Kind::Mul, {a, b})); }
Expr operator-(const Expr& a) { return Expr(makeNode(Expr::Kind::Neg, {a})); }

Expr Expr::parse(std::string_view text)
{
    return Parser(text).parseAll();
}

Expr::Kind Expr::kind() const { return node_->kind; }
double Expr::constantValue() const { return node_->value; }
int Expr::index() const { return node_->index; }
int Expr::exponent() const { return node_->exponent; }
const std::vector<Expr>& Expr::children() const { return node_->children; }

double Expr::evaluate(const Vector& x, const Vector& u) const
{
    return differentiate(x, u, Kind::Constant, 0).value;
}

Expr::Dual Expr::differentiate(const Vector& x, const Vector& u, Kind wrt, int index) const
{
    const Node& n = *node_;
    switch (n.kind) {
    case Kind::Constant:
        return {n.value, 0.0};
    case Kind::State:
    case Kind::Input: {
        const Vector& src = n.kind == Kind::State ? x : u;
        if (n.index < 1 || n.index > src.size()) {
            throw Error(ErrorCode::DimensionMismatch, "expression references " + toString() + " out of range");
        }
        return {src(n.index - 1), (n.kind == wrt && n.index == index) ? 1.0 : 0.0};
    }
    case Kind::Add: {
        const Dual a = n.children[0].differentiate(x, u, wrt, index);
        const Dual b = n.children[1].differentiate(x, u, wrt, index);
        return {a.value + b.value, a.slope + b.slope};
    }
    case Kind::Sub: {
        const Dual a = n.children[0].differentiate(x, u, wrt, index);
        const Dual b = n.children[1].differentiate(x, u, wrt, index);
        return {a.value - b.value, a.slope - b.slope};
    }
    case Kind::Mul: {
        const Dual a = n.children[0].differentiate(x, u, wrt, index);
        const Dual b = n.children[1].differentiate(x, u, wrt, index);
        return {a.value * b.value, a.slope * b.value + a.value * b.slope};
    }
    case Kind::Neg: {
        const Dual a = n.children[0].differentiate(x, u, wrt, index);
        return {-a.value, -a.slope};
    }
    case Kind::Pow: {
        const Dual a = n.children[0].differentiate(x, u, wrt, index);
        if (n.exponent == 0) {
            return {1.0, 0.0};
        }
        double below = 1.0;
        for (int i = 1; i < n.exponent; ++i) {
            below *= a.value;
        }
        return {below * a.value, n.exponent * below * a.slope};
    }
    }
    return {0.0, 0.0};
}

int Expr::maxStateIndex() const
{
    int best = node_->kind == Kind::State ? node_->index : 0;
    for (const Expr& c : node_->children) {
        best = std::max(best, c.maxStateIndex());
    }
    return best;
}

int Expr::maxInputIndex() const
{
    int best = node_->kind == Kind::Input ? node_->index : 0;
    for (const Expr& c : node_->children) {
        best = std::max(best, c.maxInputIndex());
    }
    return best;
}

std::string Expr::toString() const
{
    const Node& n = *node_;
    switch (n.kind) {
    case Kind::Constant: {
        std::ostringstream os;
        os.precision(17);
        os << n.value;
        return os.str();
    }
    case Kind::State: return "x" + std::to_string(n.index);
    case Kind::Input: return "u" + std::to_string(n.index);
    case Kind::Add: return "(" + n.children[0].toString() + " + " + n.children[1].toString() + ")";
    case Kind::Sub: return "(" + n.children[0].toString() + " - " + n.children[1].toString() + ")";
    case Kind::Mul: return "(" + n.children[0].toString() + " * " + n.children[1].toString() + ")";
    case Kind::Neg: return "(-" + n.children[0].toString() + ")";
    case Kind::Pow: return "(" + n.children[0].toString() + ")^" + std::to_string(n.exponent);
    }
    return "?";
}

void NonlinearPlant::validate() const
{
    if (n < 0 || m < 0) {
        throw Error(ErrorCode::DimensionMismatch, "plant dimensions must be nonnegative");
    }
    if (static_cast<int>(f.size()) != n) {
        throw Error(ErrorCode::DimensionMismatch,
            "state map has " + std::to_string(f.size()) + " components, expected " + std::to_string(n));
    }
    if (n + m + p() == 0) {
        throw Error(ErrorCode::DimensionMismatch, "plant has no variables");
    }
    auto check = [&](const Expr& e) {
        if (e.maxStateIndex() > n || e.maxInputIndex() > m) {
            throw Error(ErrorCode::DimensionMismatch, "expression " + e.toString() + " references an undeclared variable");
        }
    };
    for (const Expr& e : f) {
        check(e);
    }
    for (const Expr& e : h) {
        check(e);
    }
}

Vector NonlinearPlant::evalF(const Vector& x, const Vector& u) const
{
    Vector out(n);
    for (int i = 0; i < n; ++i) {
        out(i) = f[static_cast<std::size_t>(i)].evaluate(x, u);
    }
    return out;
}

Vector NonlinearPlant::evalH(const Vector& x, const Vector& u) const
{
    Vector out(p());
    for (int i = 0; i < p(); ++i) {
        out(i) = h[static_cast<std::size_t>(i)].evaluate(x, u);
    }
    return out;
}

} // namespace ati
