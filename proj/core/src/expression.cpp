// SPDX-License-Identifier: Apache-2.0
//
// fr3sim - geometry-based stochastic channel simulator for 7-24 GHz
// Copyright (C) 2026 The fr3sim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "fr3/expression.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace fr3
{
    struct Expression::Node
    {
        enum Kind
        {
            Num,
            Var,
            Add,
            Sub,
            Mul,
            Div,
            Pow,
            Neg,
            Log10,
            Min,
            Max,
            Abs
        } kind;
        double value = 0.0;
        int var = 0;
        std::vector<std::shared_ptr<const Node>> args;
    };

    namespace
    {
        using NodeP = std::shared_ptr<const Expression::Node>;
        using N = Expression::Node;

        NodeP make(N::Kind k, std::vector<NodeP> args = {}, double value = 0.0, int var = 0)
        {
            auto n = std::make_shared<N>();
            n->kind = k;
            n->args = std::move(args);
            n->value = value;
            n->var = var;
            return n;
        }

        class Parser
        {
        public:
            explicit Parser(const std::string &s) : s_(s) {}

            NodeP parse()
            {
                NodeP n = expr();
                skip();
                if (p_ != s_.size())
                    fail("unexpected trailing input");
                return n;
            }

        private:
            const std::string &s_;
            std::size_t p_ = 0;

            [[noreturn]] void fail(const std::string &what) const
            {
                throw std::invalid_argument("expression '" + s_ + "': " + what + " at position " + std::to_string(p_));
            }
            void skip()
            {
                while (p_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[p_])))
                    ++p_;
            }
            bool accept(char c)
            {
                skip();
                if (p_ < s_.size() && s_[p_] == c)
                {
                    ++p_;
                    return true;
                }
                return false;
            }
            void expect(char c)
            {
                if (!accept(c))
                    fail(std::string("expected '") + c + "'");
            }

            NodeP expr()
            {
                NodeP lhs = term();
                for (;;)
                {
                    if (accept('+'))
                        lhs = make(N::Add, {lhs, term()});
                    else if (accept('-'))
                        lhs = make(N::Sub, {lhs, term()});
                    else
                        return lhs;
                }
            }
            NodeP term()
            {
                NodeP lhs = factor();
                for (;;)
                {
                    if (accept('*'))
                        lhs = make(N::Mul, {lhs, factor()});
                    else if (accept('/'))
                        lhs = make(N::Div, {lhs, factor()});
                    else
                        return lhs;
                }
            }
            NodeP factor()
            {
                if (accept('-'))
                    return make(N::Neg, {factor()});
                if (accept('+'))
                    return factor();
                return power();
            }
            NodeP power()
            {
                NodeP base = primary();
                if (accept('^'))
                    return make(N::Pow, {base, factor()});
                return base;
            }
            NodeP primary()
            {
                skip();
                if (p_ >= s_.size())
                    fail("unexpected end");
                char c = s_[p_];
                if (c == '(')
                {
                    ++p_;
                    NodeP n = expr();
                    expect(')');
                    return n;
                }
                if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
                {
                    std::size_t used = 0;
                    double v = std::stod(s_.substr(p_), &used);
                    p_ += used;
                    return make(N::Num, {}, v);
                }
                if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
                {
                    std::size_t start = p_;
                    while (p_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[p_])) || s_[p_] == '_'))
                        ++p_;
                    std::string id = s_.substr(start, p_ - start);
                    if (id == "fc")
                        return make(N::Var, {}, 0.0, 0);
                    if (id == "d2D")
                        return make(N::Var, {}, 0.0, 1);
                    if (id == "hUE")
                        return make(N::Var, {}, 0.0, 2);
                    if (id == "hBS")
                        return make(N::Var, {}, 0.0, 3);

                    N::Kind k;
                    if (id == "log10")
                        k = N::Log10;
                    else if (id == "min")
                        k = N::Min;
                    else if (id == "max")
                        k = N::Max;
                    else if (id == "abs")
                        k = N::Abs;
                    else
                        fail("unknown identifier '" + id + "'");

                    expect('(');
                    std::vector<NodeP> args{expr()};
                    while (accept(','))
                        args.push_back(expr());
                    expect(')');
                    if ((k == N::Log10 || k == N::Abs) && args.size() != 1)
                        fail(id + " takes one argument");
                    if ((k == N::Min || k == N::Max) && args.size() < 2)
                        fail(id + " takes at least two arguments");
                    return make(k, std::move(args));
                }
                fail(std::string("unexpected character '") + c + "'");
            }
        };

        double eval_node(const N &n, const ExprVars &v)
        {
            switch (n.kind)
            {
            case N::Num:
                return n.value;
            case N::Var:
                return n.var == 0 ? v.fc : n.var == 1 ? v.d2D
                                       : n.var == 2   ? v.hUE
                                                      : v.hBS;
            case N::Add:
                return eval_node(*n.args[0], v) + eval_node(*n.args[1], v);
            case N::Sub:
                return eval_node(*n.args[0], v) - eval_node(*n.args[1], v);
            case N::Mul:
                return eval_node(*n.args[0], v) * eval_node(*n.args[1], v);
            case N::Div:
                return eval_node(*n.args[0], v) / eval_node(*n.args[1], v);
            case N::Pow:
                return std::pow(eval_node(*n.args[0], v), eval_node(*n.args[1], v));
            case N::Neg:
                return -eval_node(*n.args[0], v);
            case N::Log10:
                return std::log10(eval_node(*n.args[0], v));
            case N::Abs:
                return std::abs(eval_node(*n.args[0], v));
            case N::Min:
            case N::Max:
            {
                double r = eval_node(*n.args[0], v);
                for (std::size_t i = 1; i < n.args.size(); ++i)
                {
                    double x = eval_node(*n.args[i], v);
                    r = (n.kind == N::Min) ? std::min(r, x) : std::max(r, x);
                }
                return r;
            }
            }
            return 0.0;
        }

        bool constant_node(const N &n)
        {
            if (n.kind == N::Var)
                return false;
            return std::all_of(n.args.begin(), n.args.end(), [](const NodeP &a)
                               { return constant_node(*a); });
        }
    }

    Expression::Expression(const std::string &text) : text_(text)
    {
        if (text.find_first_not_of(" \t") == std::string::npos)
            throw std::invalid_argument("expression: empty");
        root_ = Parser(text_).parse();
    }

    double Expression::eval(const ExprVars &v) const
    {
        if (!root_)
            throw std::invalid_argument("expression: not initialized");
        return eval_node(*root_, v);
    }

    bool Expression::is_constant() const { return root_ && constant_node(*root_); }
}
