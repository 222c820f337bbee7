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

#ifndef FR3_EXPRESSION_HPP
#define FR3_EXPRESSION_HPP

#include <memory>
#include <string>

namespace fr3
{
    // Variables an expression in a parameter file may reference
    struct ExprVars
    {
        double fc = 0.0;  // carrier frequency in GHz
        double d2D = 0.0; // 2D distance in m
        double hUE = 1.5; // UE height in m
        double hBS = 0.0; // BS height in m
    };

    /*!
    Restricted arithmetic expression used in scenario parameter tables.

    Grammar:
      expr   := term (('+'|'-') term)*
      term   := factor (('*'|'/') factor)*
      factor := ('-'|'+') factor | power
      power  := primary ('^' factor)?
      primary:= number | variable | func '(' expr (',' expr)* ')' | '(' expr ')'
    Variables: fc, d2D, hUE, hBS.  Functions: log10(x), min(a,b,...), max(a,b,...), abs(x).
    */
    class Expression
    {
    public:
        struct Node;

        Expression() = default;
        explicit Expression(const std::string &text);

        double eval(const ExprVars &v) const;
        bool is_constant() const;
        const std::string &text() const { return text_; }

    private:
        std::string text_;
        std::shared_ptr<const Node> root_;
    };
}

#endif
