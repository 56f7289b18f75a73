#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "panoptica/store.hpp"
#include "panoptica/traversal.hpp"

namespace panoptica {

enum class Format { txt, csv, html, xml, sql };

std::string_view to_string(Format format);
std::optional<Format> format_from_string(std::string_view name);

/// The focus object with its attributes and one hop of dependent objects,
/// unfiltered. Formats: txt, html, xml.
std::string object_report(const Store& store, ObjectId id, Format format);

/// One row per object of `class_name` passing `filter`, ordered by (label,
/// id). Link columns show target labels. An empty column list means every
/// attribute. Formats: txt, csv, html, xml.
std::string list_report(const Store& store, std::string_view class_name, const Filter& filter,
                        std::span<const std::string> columns, Format format);

/// Whole-store export: sql (DDL then INSERTs in id order) or xml
/// (vocabulary and all objects). Throws CorruptStore if integrity fails.
std::string export_store(const Store& store, Format format);

/// Reads a document produced by export_store(xml) back into a store.
Store load_xml_export(std::string_view xml);

/// Text rendering of a ViewModel's focus and context; object_report(txt)
/// uses it.
std::string render_view_text(const ViewModel& view);

}  // namespace panoptica
