#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>

namespace gammaflow {

/// A real sequence k -> a_k, k >= 0.
using Sequence = std::function<double(std::int64_t)>;

/// Small arithmetic expression in the variable k.
///
/// Grammar:
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := '-' unary | power
///   power   := primary ('^' exponent)?
///   exponent:= integer literal | 'k' | '(' integer literal ')'
///   primary := number | 'k' | '(' expr ')' | 'exp' '(' expr ')'
///
/// Exponents are integers only; exponentials in k are written either as
/// c^k or exp(...).
class SequenceExpr {
 public:
  static SequenceExpr parse(std::string_view text);

  double operator()(std::int64_t k) const;
  const std::string& text() const noexcept { return text_; }
  Sequence as_sequence() const;

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace gammaflow
