// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The vortex library authors

#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace vortex {

// Fixed-format float printing: every floating-point number in a report
// goes through fmt17 (printf %.17g) so that identical inputs produce
// byte-identical files. (A shortest-roundtrip printer would also be
// deterministic, but the output contract pins 17 significant digits.)
std::string fmt17(double x);

// Minimal ordered JSON document builder + emitter. Insertion order is
// preserved and doubles are emitted via fmt17; that is the whole reason
// this exists instead of a general-purpose JSON library.
class JsonValue {
  public:
    JsonValue() : data_(nullptr) {}
    JsonValue(std::nullptr_t) : data_(nullptr) {}
    JsonValue(bool b) : data_(b) {}
    JsonValue(int v) : data_(static_cast<std::int64_t>(v)) {}
    JsonValue(std::int64_t v) : data_(v) {}
    JsonValue(std::uint64_t v) : data_(v) {}
    JsonValue(double v) : data_(v) {}
    JsonValue(const char* s) : data_(std::string(s)) {}
    JsonValue(std::string s) : data_(std::move(s)) {}

    static JsonValue object();
    static JsonValue array();

    // object access; inserts on first use, preserves insertion order
    JsonValue& operator[](const std::string& key);
    // array append
    JsonValue& push_back(JsonValue v);

    bool is_object() const;
    bool is_array() const;

    std::string dump(int indent = 2) const;

    template <typename Derived>
    static JsonValue from_vector(const Eigen::MatrixBase<Derived>& v) {
        JsonValue a = array();
        for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(static_cast<double>(v(i)));
        return a;
    }

    static JsonValue from_complex_vector(const Eigen::VectorXcd& v);
    static JsonValue from_int_matrix(const Eigen::MatrixXi& m);

  private:
    struct Object {
        std::vector<std::pair<std::string, JsonValue>> items;
    };
    struct Array {
        std::vector<JsonValue> items;
    };
    using Data = std::variant<std::nullptr_t, bool, std::int64_t, std::uint64_t, double, std::string,
                              std::shared_ptr<Object>, std::shared_ptr<Array>>;
    Data data_;

    void write(std::string& out, int indent, int depth) const;
};

// Writes text to a file, creating parent directories; throws on failure.
void write_file(const std::string& path, const std::string& contents);

// CSV helper: header row + rows of fixed-format doubles.
std::string csv_table(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);

} // namespace vortex
