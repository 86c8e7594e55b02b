#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "bpmine/bayesnet.hpp"
#include "bpmine/errors.hpp"
#include "bpmine/eventlog.hpp"

namespace bpmine {

/// Versioned text format for networks ("bpnet 1"). Tab-separated because
/// task names may contain spaces; probabilities printed with 17 significant
/// digits so load(save(net)) == net exactly. Grammar in docs/formats.md.
std::string save_network(const BayesianNetwork& net);

/// Parses and validates a network document. Throws FormatVersionError on a
/// bad first line, FormatError (with line number) on malformed structure,
/// NormalizationError when a CPT row does not sum to 1 within 1e-9, and
/// CycleError when the parent relation is cyclic.
BayesianNetwork load_network(std::string_view bytes);

/// Training matrix format: first line the variable names, then one line of
/// present/absent tokens per case.
std::string save_training(const PresenceMatrix& matrix, char delimiter = ',');

/// Throws FormatError with a line number on width or token errors.
PresenceMatrix load_training(std::string_view bytes, char delimiter = ',');

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

} // namespace bpmine
