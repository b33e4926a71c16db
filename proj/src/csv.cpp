// Copyright 2026 The crashdash Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "crashdash/csv.hpp"

namespace crashdash {

CsvReader::CsvReader(std::string_view data) : data_(data) {
  if (data_.substr(0, 3) == "\xEF\xBB\xBF") pos_ = 3;
}

bool CsvReader::next(CsvRecord& record) {
  record.fields.clear();
  record.error.reset();

  // Skip empty lines.
  while (pos_ < data_.size() && (data_[pos_] == '\n' || data_[pos_] == '\r')) ++pos_;
  if (pos_ >= data_.size()) return false;

  std::string field;
  bool in_quotes = false;
  bool after_quote = false;  // just closed a quoted section
  while (pos_ < data_.size()) {
    char c = data_[pos_];
    if (in_quotes) {
      if (c == '"') {
        if (pos_ + 1 < data_.size() && data_[pos_ + 1] == '"') {
          field.push_back('"');
          pos_ += 2;
          continue;
        }
        in_quotes = false;
        after_quote = true;
        ++pos_;
        continue;
      }
      field.push_back(c);
      ++pos_;
      continue;
    }
    if (c == ',') {
      record.fields.push_back(std::move(field));
      field.clear();
      after_quote = false;
      ++pos_;
      continue;
    }
    if (c == '\n' || c == '\r') {
      ++pos_;
      if (c == '\r' && pos_ < data_.size() && data_[pos_] == '\n') ++pos_;
      record.fields.push_back(std::move(field));
      return true;
    }
    if (c == '"') {
      if (field.empty() && !after_quote) {
        in_quotes = true;
      } else if (!record.error) {
        record.error = "stray quote in field " + std::to_string(record.fields.size() + 1);
        field.push_back(c);
      }
      ++pos_;
      continue;
    }
    if (after_quote && !record.error) {
      record.error = "text after closing quote in field " + std::to_string(record.fields.size() + 1);
    }
    field.push_back(c);
    ++pos_;
  }
  if (in_quotes) record.error = "unterminated quoted field";
  record.fields.push_back(std::move(field));
  return true;
}

std::string csv_escape(std::string_view field) {
  bool needs_quotes = field.find_first_of(",\"\r\n") != std::string_view::npos;
  if (!needs_quotes) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void append_csv_row(std::string& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out.push_back(',');
    out += csv_escape(fields[i]);
  }
  out.push_back('\n');
}

void append_csv_row(std::string& out, std::initializer_list<std::string_view> fields) {
  bool first = true;
  for (auto f : fields) {
    if (!first) out.push_back(',');
    first = false;
    out += csv_escape(f);
  }
  out.push_back('\n');
}

}  // namespace crashdash
