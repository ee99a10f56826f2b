#include "lfkit/expression.hpp"

#include "lfkit/error.hpp"

#include <algorithm>
#include <cctype>

namespace lfkit {

struct Expression::Node {
    enum class Kind { Constant, Variable, Add, Xor, Mul };
    Kind kind = Kind::Constant;
    std::int64_t value = 0;
    std::string name;
    std::size_t slot = 0;
    std::shared_ptr<Node> lhs, rhs;
};

namespace {

using NodePtr = std::shared_ptr<Expression::Node>;

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    NodePtr parse() {
        NodePtr n = sum();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + s_.substr(pos_, 1) + "'");
        return n;
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("expression '" + s_ + "' at " + std::to_string(pos_) + ": " + what);
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(const std::string& tok) {
        skip();
        if (s_.compare(pos_, tok.size(), tok) == 0) {
            pos_ += tok.size();
            return true;
        }
        return false;
    }

    static NodePtr binary(Expression::Node::Kind k, NodePtr l, NodePtr r) {
        auto n = std::make_shared<Expression::Node>();
        n->kind = k;
        n->lhs = std::move(l);
        n->rhs = std::move(r);
        return n;
    }

    NodePtr sum() {
        NodePtr n = prod();
        for (;;) {
            if (accept("+")) n = binary(Expression::Node::Kind::Add, n, prod());
            else if (accept("\xE2\x8A\x95") || accept("^")) n = binary(Expression::Node::Kind::Xor, n, prod());
            else return n;
        }
    }

    NodePtr prod() {
        NodePtr n = atom();
        for (;;) {
            if (accept("*") || accept("\xC2\xB7")) n = binary(Expression::Node::Kind::Mul, n, atom());
            else return n;
        }
    }

    NodePtr atom() {
        skip();
        if (accept("(")) {
            NodePtr n = sum();
            if (!accept(")")) fail("expected ')'");
            return n;
        }
        if (pos_ >= s_.size()) fail("unexpected end");
        auto n = std::make_shared<Expression::Node>();
        unsigned char c = static_cast<unsigned char>(s_[pos_]);
        if (std::isdigit(c)) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            n->kind = Expression::Node::Kind::Constant;
            n->value = std::stoll(s_.substr(start, pos_ - start));
            return n;
        }
        if (std::isalpha(c) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            n->kind = Expression::Node::Kind::Variable;
            n->name = s_.substr(start, pos_ - start);
            return n;
        }
        fail("unexpected character");
    }
};

void collect(const Expression::Node* n, std::set<std::string>& out) {
    if (!n) return;
    if (n->kind == Expression::Node::Kind::Variable) out.insert(n->name);
    collect(n->lhs.get(), out);
    collect(n->rhs.get(), out);
}

NodePtr rebind(const Expression::Node& n, const std::vector<std::string>& slots) {
    auto c = std::make_shared<Expression::Node>(n);
    if (n.kind == Expression::Node::Kind::Variable) {
        auto it = std::find(slots.begin(), slots.end(), n.name);
        if (it == slots.end()) throw ParseError("unknown variable '" + n.name + "' in expression");
        c->slot = static_cast<std::size_t>(it - slots.begin());
    }
    if (n.lhs) c->lhs = rebind(*n.lhs, slots);
    if (n.rhs) c->rhs = rebind(*n.rhs, slots);
    return c;
}

std::int64_t eval(const Expression::Node& n, const std::vector<std::int64_t>& v) {
    using K = Expression::Node::Kind;
    switch (n.kind) {
        case K::Constant: return n.value;
        case K::Variable: return v.at(n.slot);
        case K::Add: return eval(*n.lhs, v) + eval(*n.rhs, v);
        case K::Xor: {
            std::int64_t s = (eval(*n.lhs, v) + eval(*n.rhs, v)) % 2;
            return s < 0 ? s + 2 : s;
        }
        case K::Mul: return eval(*n.lhs, v) * eval(*n.rhs, v);
    }
    return 0;
}

}  // namespace

Expression Expression::parse(const std::string& text) {
    Expression e;
    e.text_ = text;
    e.root_ = Parser(text).parse();
    return e;
}

std::set<std::string> Expression::variables() const {
    std::set<std::string> out;
    collect(root_.get(), out);
    return out;
}

void Expression::bind(const std::vector<std::string>& slots) { root_ = rebind(*root_, slots); }

std::int64_t Expression::evaluate(const std::vector<std::int64_t>& values) const { return eval(*root_, values); }

}  // namespace lfkit
