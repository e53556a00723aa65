#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace wfchef {

// Every failure raised by the library carries a short machine-readable
// category; the command-line front end prints it as `error: <category>: ...`.
class error : public std::runtime_error {
public:
    error(std::string category, const std::string& message)
        : std::runtime_error(message), category_(std::move(category)) {}

    const std::string& category() const noexcept { return category_; }

private:
    std::string category_;
};

class parse_error : public error {
public:
    explicit parse_error(const std::string& message) : error("parse", message) {}
};

class validation_error : public error {
public:
    explicit validation_error(const std::string& message) : error("validation", message) {}
};

class cycle_error : public error {
public:
    cycle_error(const std::string& message, std::vector<std::string> cycle)
        : error("cycle", message), cycle_(std::move(cycle)) {}

    // Vertex ids along one cycle; the first id is repeated at the end.
    const std::vector<std::string>& cycle() const noexcept { return cycle_; }

private:
    std::vector<std::string> cycle_;
};

class unknown_vertex_error : public error {
public:
    explicit unknown_vertex_error(const std::string& id) : error("unknown-vertex", "no vertex with id '" + id + "'") {}
};

class not_scalable_error : public error {
public:
    explicit not_scalable_error(const std::string& message) : error("not-scalable", message) {}
};

class recipe_version_error : public error {
public:
    explicit recipe_version_error(const std::string& message) : error("recipe-version", message) {}
};

class corrupt_recipe_error : public error {
public:
    explicit corrupt_recipe_error(const std::string& message) : error("corrupt-recipe", message) {}
};

class invalid_argument_error : public error {
public:
    explicit invalid_argument_error(const std::string& message) : error("invalid-argument", message) {}
};

// A file that cannot be opened for reading or writing.
class io_error : public error {
public:
    explicit io_error(const std::string& message) : error("io", message) {}
};

class missing_attribute_error : public error {
public:
    explicit missing_attribute_error(const std::string& message) : error("missing-attribute", message) {}
};

// Raised when an internal consistency check fails; maps to exit status 3.
class internal_error : public error {
public:
    explicit internal_error(const std::string& message) : error("internal", message) {}
};

} // namespace wfchef
