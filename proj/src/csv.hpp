// Copyright 2026 The qdressed Authors
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

// RFC 4180 record reader: quoted fields, doubled quotes, embedded newlines.

#pragma once

#include <cstddef>
#include <istream>
#include <string>
#include <vector>

#include "qdressed/error.hpp"

namespace qdressed::detail {

class CsvReader {
  public:
    explicit CsvReader(std::istream &in) : in_(in) {
        if (in_.peek() == 0xEF) { // UTF-8 byte order mark
            char bom[3];
            in_.read(bom, 3);
        }
    }

    /// Reads the next record into `fields`. Returns false at end of input.
    bool next(std::vector<std::string> &fields) {
        fields.clear();
        record_line_ = line_ + 1;
        int ch = in_.get();
        if (ch == std::char_traits<char>::eof()) {
            return false;
        }
        std::string field;
        bool quoted = false;
        bool field_was_quoted = false;
        while (true) {
            if (ch == std::char_traits<char>::eof()) {
                if (quoted) {
                    throw ParseError(record_line_, "unterminated quoted field");
                }
                ++line_;
                break;
            }
            const char c = static_cast<char>(ch);
            if (quoted) {
                if (c == '"') {
                    if (in_.peek() == '"') {
                        field.push_back('"');
                        in_.get();
                    } else {
                        quoted = false;
                    }
                } else {
                    if (c == '\n') {
                        ++line_;
                    }
                    field.push_back(c);
                }
            } else if (c == '"' && field.empty() && !field_was_quoted) {
                quoted = true;
                field_was_quoted = true;
            } else if (c == ',') {
                fields.push_back(std::move(field));
                field.clear();
                field_was_quoted = false;
            } else if (c == '\n') {
                ++line_;
                break;
            } else if (c == '\r') {
                if (in_.peek() == '\n') {
                    in_.get();
                }
                ++line_;
                break;
            } else {
                field.push_back(c);
            }
            ch = in_.get();
        }
        fields.push_back(std::move(field));
        return true;
    }

    /// 1-based line on which the most recent record started.
    [[nodiscard]] std::size_t record_line() const noexcept { return record_line_; }

  private:
    std::istream &in_;
    std::size_t line_{0};
    std::size_t record_line_{0};
};

inline bool is_blank_record(const std::vector<std::string> &fields) {
    return fields.size() == 1 && fields[0].find_first_not_of(" \t") == std::string::npos;
}

} // namespace qdressed::detail
