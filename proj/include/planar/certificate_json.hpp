#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "planar/positivity.hpp"

namespace planar {

/// Canonical JSON for sign certificates. Keys are sorted, only the fields
/// meaningful for the certificate kind are present, rationals and
/// polynomials are strings, and infinite box bounds are "inf" / "-inf".
nlohmann::json certificate_to_json(const SignCertificate& cert);
/// Strict inverse: unknown or missing keys throw std::invalid_argument.
SignCertificate certificate_from_json(const nlohmann::json& j);

nlohmann::json box_to_json(const Box& b);
nlohmann::json region_to_json(const Region& r);

std::string serialize_certificate(const SignCertificate& cert);
SignCertificate parse_certificate(const std::string& text);

/// Audits a serialized certificate for p on region: the text must be
/// canonical (re-serializes byte for byte), replay exactly and cover the
/// region. Never throws.
bool verify_certificate_text(const std::string& text, const BivarPoly& p, const Region& region);

}  // namespace planar
