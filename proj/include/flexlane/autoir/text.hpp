// Copyright 2026 The flexlane Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <string_view>

#include "flexlane/autoir/program.hpp"
#include "flexlane/common/error.hpp"

namespace flexlane::autoir
{

enum class ParseErrorCode { SyntaxError, MissingField, BadValue };

std::string_view to_string(ParseErrorCode code);

using ParseError = CodedError<ParseErrorCode>;

/// Parses an AutoIR document.
///
/// Two surface forms are accepted:
///  - key/value lines (`moduleSelect: perception`), one field per line, blank
///    lines and `#` comments ignored;
///  - a JSON object with the same keys.
///
/// Key names match case-insensitively; values keep their case. A missing
/// `Timer` is filled with the 10 s default.
AutoIRProgram parse_autoir(std::string_view text);

/// Canonical key/value form, fixed key order, one field per line, trailing newline.
std::string serialize_autoir(const AutoIRProgram & program);

/// serialize(parse(text)).
std::string canonicalize_autoir(std::string_view text);

}  // namespace flexlane::autoir
