#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "adjsim/adjust.hpp"
#include "adjsim/properties.hpp"
#include "adjsim/repro.hpp"

namespace adjsim {

enum class InputFormat { table, labels };

// I rows x J columns of nonnegative integer counts. Throws InputError with
// the 1-based (row, column) of ragged rows, negative or non-integer cells.
ContingencyTable parse_table_csv(std::istream& in, bool header = false);

// Two columns x,y, one observation per row, optional header.
ContingencyTable parse_labels_csv(std::istream& in, bool header = false, LabelShape shape = {});

ContingencyTable read_table_file(const std::string& path, InputFormat format, bool header = false,
                                 LabelShape shape = {});

using Json = nlohmann::ordered_json;

Json to_json(const ContingencyTable& t);

template <class Real>
Json to_json(const EstimateResult<Real>& e);

// {index, model, max_spec, raw, expected:{value,method,stderr}, max, adjusted,
//  degenerate, convention_c, seed, ...}. Exact mode adds an "exact" object
// with rational strings.
template <class Real>
Json to_json(const AdjustmentResult<Real>& r);

Json to_json(const PropertyReport& r);

template <class Real>
Json to_json(const repro::CounterexampleRecord<Real>& r);

}  // namespace adjsim
