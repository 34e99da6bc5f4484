#pragma once

// JSON and CSV formats. Rationals are "num/den" strings; every document
// carries "format": 1.

#include <json.hpp>

#include <optional>
#include <span>
#include <string>

#include "massart/instances.hpp"

namespace massart::serialize {

using Json = nlohmann::ordered_json;
using exactmath::UnivariateMeasure;
using univariate::AuditCheck;

inline constexpr int kFormatVersion = 1;

Json to_json(const Rational& r);
Rational rational_from_json(const Json& j);

Json to_json(const Interval& iv);
Json to_json(const UnivariateMeasure& a);
UnivariateMeasure measure_from_json(const Json& j);
Json to_json(const univariate::SignedCorrection& mu);
univariate::SignedCorrection correction_from_json(const Json& j);
Json to_json(const univariate::UnivariateParams& p);
univariate::UnivariateParams params_from_json(const Json& j);

Json to_json(const std::vector<AuditCheck>& checks);
Json to_json(const univariate::Prop32Report& r);
Json to_json(const instances::MassartReport& r);
Json to_json(const junta::SubsetFamily& f);
Json to_json(const junta::SqBoundReport& r);

Json bundle_to_json(const instances::InstanceBundle& b);
/// Restores every stored field and recomputes the audits. Throws FormatError.
instances::InstanceBundle bundle_from_json(const Json& j);

/// Parses text; FormatError on malformed JSON or a wrong format version.
Json parse_document(const std::string& text);
/// Pretty-printed with a trailing newline.
std::string dump(const Json& j);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

/// "label,bits" or "label,bits,veronese_bits".
std::string sample_csv_row(const Rational& label, std::span<const std::uint8_t> x,
                           std::optional<std::span<const std::uint8_t>> veronese = std::nullopt);

std::string bitstring(std::span<const std::uint8_t> x);

}  // namespace massart::serialize
