#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "wulffmc/interaction.hpp"

namespace wulffmc {

// malformed or inconsistent record text; messages carry the line number
class RecordError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// shortest decimal that parses back to the identical double
std::string format_double(double v);
double parse_double(std::string_view text);

// Self-describing line-oriented text records. Round-trips are exact: parsing
// a record reproduces the original object bit for bit (shapes restore their
// stored representation without renormalizing).
std::string shape_record(const Shape& shape);
Shape parse_shape_record(std::string_view text);

// dimension, particle count, container shape + target volume, position rows
std::string configuration_record(const ParticleConfiguration& config);
ParticleConfiguration parse_configuration_record(std::string_view text);

}  // namespace wulffmc
