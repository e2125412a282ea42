#include <charconv>
#include <cmath>

#include "sfcscan/field.hpp"
#include "sfcscan/grid.hpp"

namespace sfcscan {

GridShape parse_shape(const std::string& text) {
    auto parse_int = [&](std::string_view s) {
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size()) {
            throw InvalidArgument("bad grid size '" + text + "'");
        }
        return v;
    };
    const auto x = text.find_first_of("xX");
    if (x == std::string::npos) {
        const auto n = parse_int(text);
        return {n, n};
    }
    std::string_view sv(text);
    return {parse_int(sv.substr(0, x)), parse_int(sv.substr(x + 1))};
}

ScalarField::ScalarField(GridShape shape, std::vector<double> values)
    : shape_(shape), values_(std::move(values)) {
    if (values_.size() != shape_.cells()) {
        throw ShapeMismatch("field has " + std::to_string(values_.size()) + " values, grid " +
                            shape_.to_string() + " needs " + std::to_string(shape_.cells()));
    }
    for (double v : values_) {
        if (!std::isfinite(v)) throw InvalidArgument("field values must be finite");
    }
}

}  // namespace sfcscan
