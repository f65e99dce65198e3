// Copyright 2026 The gotext Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GOTEXT_ENGINE_TEXT_H_
#define GOTEXT_ENGINE_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

namespace gotext {

using Tokens = std::vector<std::string>;

// Lowercases, treats every non-alphanumeric character (punctuation, hyphens,
// whitespace) as a separator and drops empty pieces.
Tokens Tokenize(std::string_view text);

std::string JoinTokens(const Tokens& tokens, std::string_view sep = " ");

void AppendTokens(Tokens& dst, const Tokens& src);

// Appends the tokens of `text`.
void AppendText(Tokens& dst, std::string_view text);

}  // namespace gotext

#endif  // GOTEXT_ENGINE_TEXT_H_
