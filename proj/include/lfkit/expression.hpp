#ifndef LFKIT_EXPRESSION_HPP
#define LFKIT_EXPRESSION_HPP

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace lfkit {

/**
 * Integer expression over named variables.
 *
 *   sum  := prod (('+' | '⊕' | '^') prod)*
 *   prod := atom (('*' | '·') atom)*
 *   atom := integer | identifier | '(' sum ')'
 *
 * '+' is integer addition, '⊕' and '^' are addition modulo 2, '*' and '·'
 * are multiplication.
 */
class Expression {
public:
    static Expression parse(const std::string& text);

    const std::string& text() const { return text_; }
    std::set<std::string> variables() const;

    /// Resolves variable names to slots; throws ParseError for unknown names.
    void bind(const std::vector<std::string>& slots);
    /// Requires bind(); values indexed by slot.
    std::int64_t evaluate(const std::vector<std::int64_t>& values) const;

    struct Node;

private:
    std::string text_;
    std::shared_ptr<const Node> root_;
};

}  // namespace lfkit

#endif  // LFKIT_EXPRESSION_HPP
