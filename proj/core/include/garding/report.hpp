#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "garding/matrix_core.hpp"

namespace garding {

// Structured pass/fail result of a verification. Margins are named reals in
// insertion order; a failing report always carries either a witness or a
// named failing margin.
struct CheckReport {
  std::string suite;
  bool pass = false;
  std::vector<std::pair<std::string, double>> margins;
  std::optional<Mat> witness;                 // matrix witness, if any
  std::optional<std::vector<double>> witness_vector;
  std::vector<std::string> notes;             // e.g. "sampled, not proven"

  void margin(const std::string& name, double value) {
    margins.emplace_back(name, value);
  }
  void note(std::string s) { notes.push_back(std::move(s)); }
};

// Minimal ordered JSON document builder with deterministic output: object
// keys keep insertion order and every number is serialized with 17
// significant digits, so byte-identical configs give byte-identical reports.
class JsonValue {
 public:
  static JsonValue null();
  static JsonValue boolean(bool b);
  static JsonValue number(double v);
  static JsonValue integer(long long v);
  static JsonValue string(std::string s);
  static JsonValue array();
  static JsonValue object();

  JsonValue& push(JsonValue v);                       // array append
  JsonValue& set(const std::string& key, JsonValue v);  // object insert

  static JsonValue matrix(const Mat& m);
  static JsonValue vector(const std::vector<double>& v);
  static JsonValue from_report(const CheckReport& r);

  std::string dump(int indent = 2) const;

 private:
  enum class Tag { null_t, bool_t, num_t, int_t, str_t, arr_t, obj_t };
  Tag tag_ = Tag::null_t;
  bool b_ = false;
  double num_ = 0;
  long long int_ = 0;
  std::string str_;
  std::vector<JsonValue> arr_;
  std::vector<std::pair<std::string, JsonValue>> obj_;

  void write(std::string& out, int indent, int depth) const;
};

// Formats one double with 17 significant digits (the report convention).
std::string format_number(double v);

}  // namespace garding
