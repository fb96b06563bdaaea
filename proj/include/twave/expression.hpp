#pragma once

#include <memory>
#include <string>
#include <vector>

namespace twave {

// Compiled scalar expression in the variable u.
//
// Grammar:
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' unary)?        right associative
//   primary := number | 'u' | func '(' args ')' | '(' expr ')'
//   func    := pow/2 | exp/1 | log/1 | sqrt/1
//
// '^' binds tighter than unary minus: -u^2 == -(u^2).
// Evaluation throws Error(domain) for log or sqrt of a negative value and
// for pow results that are NaN with finite inputs.
class Expression {
public:
    static Expression parse(const std::string& source);
    static Expression constant(double value);

    double operator()(double u) const;
    const std::string& source() const { return program_->source; }

private:
    enum class Op : unsigned char { push, var, add, sub, mul, div, pow, neg, exp, log, sqrt };
    struct Instr {
        Op op;
        double value;
    };
    struct Program {
        std::string source;
        std::vector<Instr> code;
        std::size_t max_depth = 0;
    };
    friend class Parser;

    std::shared_ptr<const Program> program_;
};

} // namespace twave
