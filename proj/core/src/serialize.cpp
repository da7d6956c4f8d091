#include "vortex/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace vortex {

std::string fmt17(double x) {
    if (std::isnan(x)) return "null";
    if (std::isinf(x)) return x > 0 ? "1e999" : "-1e999";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

JsonValue JsonValue::object() {
    JsonValue v;
    v.data_ = std::make_shared<Object>();
    return v;
}

JsonValue JsonValue::array() {
    JsonValue v;
    v.data_ = std::make_shared<Array>();
    return v;
}

bool JsonValue::is_object() const { return std::holds_alternative<std::shared_ptr<Object>>(data_); }
bool JsonValue::is_array() const { return std::holds_alternative<std::shared_ptr<Array>>(data_); }

JsonValue& JsonValue::operator[](const std::string& key) {
    if (!is_object()) data_ = std::make_shared<Object>();
    auto& items = std::get<std::shared_ptr<Object>>(data_)->items;
    for (auto& [k, v] : items) {
        if (k == key) return v;
    }
    items.emplace_back(key, JsonValue());
    return items.back().second;
}

JsonValue& JsonValue::push_back(JsonValue v) {
    if (!is_array()) data_ = std::make_shared<Array>();
    auto& items = std::get<std::shared_ptr<Array>>(data_)->items;
    items.push_back(std::move(v));
    return items.back();
}

JsonValue JsonValue::from_complex_vector(const Eigen::VectorXcd& v) {
    JsonValue a = array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        JsonValue pair = array();
        pair.push_back(v(i).real());
        pair.push_back(v(i).imag());
        a.push_back(std::move(pair));
    }
    return a;
}

JsonValue JsonValue::from_int_matrix(const Eigen::MatrixXi& m) {
    JsonValue rows = array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        JsonValue row = array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(static_cast<std::int64_t>(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

void write_escaped(std::string& out, const std::string& s) {
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
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
}

void indent_to(std::string& out, int indent, int depth) {
    if (indent > 0) {
        out += '\n';
        out.append(static_cast<std::size_t>(indent * depth), ' ');
    }
}

} // namespace

void JsonValue::write(std::string& out, int indent, int depth) const {
    if (std::holds_alternative<std::nullptr_t>(data_)) {
        out += "null";
    } else if (std::holds_alternative<bool>(data_)) {
        out += std::get<bool>(data_) ? "true" : "false";
    } else if (std::holds_alternative<std::int64_t>(data_)) {
        out += std::to_string(std::get<std::int64_t>(data_));
    } else if (std::holds_alternative<std::uint64_t>(data_)) {
        out += std::to_string(std::get<std::uint64_t>(data_));
    } else if (std::holds_alternative<double>(data_)) {
        out += fmt17(std::get<double>(data_));
    } else if (std::holds_alternative<std::string>(data_)) {
        write_escaped(out, std::get<std::string>(data_));
    } else if (is_object()) {
        const auto& items = std::get<std::shared_ptr<Object>>(data_)->items;
        if (items.empty()) {
            out += "{}";
            return;
        }
        out += '{';
        bool first = true;
        for (const auto& [k, v] : items) {
            if (!first) out += ',';
            first = false;
            indent_to(out, indent, depth + 1);
            write_escaped(out, k);
            out += indent > 0 ? ": " : ":";
            v.write(out, indent, depth + 1);
        }
        indent_to(out, indent, depth);
        out += '}';
    } else {
        const auto& items = std::get<std::shared_ptr<Array>>(data_)->items;
        if (items.empty()) {
            out += "[]";
            return;
        }
        out += '[';
        bool first = true;
        for (const auto& v : items) {
            if (!first) out += ',';
            first = false;
            indent_to(out, indent, depth + 1);
            v.write(out, indent, depth + 1);
        }
        indent_to(out, indent, depth);
        out += ']';
    }
}

std::string JsonValue::dump(int indent) const {
    std::string out;
    write(out, indent, 0);
    out += '\n';
    return out;
}

void write_file(const std::string& path, const std::string& contents) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!f) throw std::runtime_error("write failed: " + path);
}

std::string csv_table(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out += ',';
        out += header[i];
    }
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += fmt17(row[i]);
        }
        out += '\n';
    }
    return out;
}

} // namespace vortex
