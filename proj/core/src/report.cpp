#include "garding/report.hpp"

#include <cmath>
#include <cstdio>

namespace garding {

std::string format_number(double v) {
  if (std::isnan(v)) return "null";
  if (std::isinf(v)) return v > 0 ? "1e999" : "-1e999";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

JsonValue JsonValue::null() { return JsonValue(); }

JsonValue JsonValue::boolean(bool b) {
  JsonValue v;
  v.tag_ = Tag::bool_t;
  v.b_ = b;
  return v;
}

JsonValue JsonValue::number(double d) {
  JsonValue v;
  v.tag_ = Tag::num_t;
  v.num_ = d;
  return v;
}

JsonValue JsonValue::integer(long long i) {
  JsonValue v;
  v.tag_ = Tag::int_t;
  v.int_ = i;
  return v;
}

JsonValue JsonValue::string(std::string s) {
  JsonValue v;
  v.tag_ = Tag::str_t;
  v.str_ = std::move(s);
  return v;
}

JsonValue JsonValue::array() {
  JsonValue v;
  v.tag_ = Tag::arr_t;
  return v;
}

JsonValue JsonValue::object() {
  JsonValue v;
  v.tag_ = Tag::obj_t;
  return v;
}

JsonValue& JsonValue::push(JsonValue v) {
  arr_.push_back(std::move(v));
  return *this;
}

JsonValue& JsonValue::set(const std::string& key, JsonValue v) {
  obj_.emplace_back(key, std::move(v));
  return *this;
}

JsonValue JsonValue::matrix(const Mat& m) {
  JsonValue rows = array();
  for (int i = 0; i < m.rows(); ++i) {
    JsonValue row = array();
    for (int j = 0; j < m.cols(); ++j) row.push(number(m(i, j)));
    rows.push(std::move(row));
  }
  return rows;
}

JsonValue JsonValue::vector(const std::vector<double>& v) {
  JsonValue arr = array();
  for (double x : v) arr.push(number(x));
  return arr;
}

JsonValue JsonValue::from_report(const CheckReport& r) {
  JsonValue doc = object();
  doc.set("suite", string(r.suite));
  doc.set("pass", boolean(r.pass));
  JsonValue margins = object();
  for (const auto& [name, value] : r.margins) margins.set(name, number(value));
  doc.set("margins", std::move(margins));
  doc.set("witness", r.witness ? matrix(*r.witness) : null());
  doc.set("witness_vector",
          r.witness_vector ? vector(*r.witness_vector) : null());
  JsonValue notes = array();
  for (const auto& n : r.notes) notes.push(string(n));
  doc.set("notes", std::move(notes));
  return doc;
}

static void write_escaped(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

void JsonValue::write(std::string& out, int indent, int depth) const {
  const std::string pad(static_cast<size_t>(indent) * depth, ' ');
  const std::string pad1(static_cast<size_t>(indent) * (depth + 1), ' ');
  switch (tag_) {
    case Tag::null_t: out += "null"; break;
    case Tag::bool_t: out += b_ ? "true" : "false"; break;
    case Tag::num_t: out += format_number(num_); break;
    case Tag::int_t: out += std::to_string(int_); break;
    case Tag::str_t: write_escaped(out, str_); break;
    case Tag::arr_t: {
      if (arr_.empty()) {
        out += "[]";
        break;
      }
      // Arrays of scalars stay on one line; nested structures get one
      // element per line for readable diffs.
      bool scalar = true;
      for (const auto& v : arr_) {
        if (v.tag_ == Tag::arr_t || v.tag_ == Tag::obj_t) scalar = false;
      }
      out += '[';
      for (size_t i = 0; i < arr_.size(); ++i) {
        if (!scalar) {
          out += '\n';
          out += pad1;
        }
        arr_[i].write(out, indent, depth + 1);
        if (i + 1 < arr_.size()) out += scalar ? ", " : ",";
      }
      if (!scalar) {
        out += '\n';
        out += pad;
      }
      out += ']';
      break;
    }
    case Tag::obj_t: {
      if (obj_.empty()) {
        out += "{}";
        break;
      }
      out += '{';
      for (size_t i = 0; i < obj_.size(); ++i) {
        out += '\n';
        out += pad1;
        write_escaped(out, obj_[i].first);
        out += ": ";
        obj_[i].second.write(out, indent, depth + 1);
        if (i + 1 < obj_.size()) out += ',';
      }
      out += '\n';
      out += pad;
      out += '}';
      break;
    }
  }
}

std::string JsonValue::dump(int indent) const {
  std::string out;
  write(out, indent, 0);
  out += '\n';
  return out;
}

}  // namespace garding
