#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace casnet {

enum class ClassKind : std::uint8_t { kThing, kStuff };

struct ClassDef {
  std::uint16_t id = 0;
  std::string name;
  ClassKind kind = ClassKind::kStuff;
  bool operator==(const ClassDef&) const = default;
};

// Ordered class list.  Id 0 is reserved for void/background and ids must be
// contiguous from 0.
struct ClassTable {
  std::vector<ClassDef> classes;

  std::size_t size() const { return classes.size(); }

  const ClassDef& at(std::uint16_t id) const { return classes.at(id); }

  bool is_thing(std::uint16_t id) const {
    return id != 0 && id < classes.size() &&
           classes[id].kind == ClassKind::kThing;
  }
  bool is_stuff(std::uint16_t id) const {
    return id != 0 && id < classes.size() &&
           classes[id].kind == ClassKind::kStuff;
  }

  std::vector<std::uint16_t> thing_ids() const {
    std::vector<std::uint16_t> out;
    for (const auto& c : classes)
      if (c.id != 0 && c.kind == ClassKind::kThing) out.push_back(c.id);
    return out;
  }
  std::vector<std::uint16_t> stuff_ids() const {
    std::vector<std::uint16_t> out;
    for (const auto& c : classes)
      if (c.id != 0 && c.kind == ClassKind::kStuff) out.push_back(c.id);
    return out;
  }

  void validate() const {
    if (classes.empty()) throw std::invalid_argument("class table is empty");
    for (std::size_t i = 0; i < classes.size(); ++i)
      if (classes[i].id != i)
        throw std::invalid_argument("class ids must be contiguous from 0");
  }

  bool operator==(const ClassTable&) const = default;
};

inline const char* kind_name(ClassKind k) {
  return k == ClassKind::kThing ? "thing" : "stuff";
}

// Default table: void, then `n_things` thing classes, then `n_stuffs` stuff
// classes.
inline ClassTable default_class_table(int n_things, int n_stuffs) {
  static const char* kThingNames[] = {"car",   "person",     "truck",
                                      "bus",   "motorcycle", "bicycle",
                                      "rider", "train"};
  static const char* kStuffNames[] = {"road", "sky",        "building",
                                      "grass", "sidewalk",  "wall",
                                      "fence", "vegetation"};
  ClassTable t;
  t.classes.push_back({0, "void", ClassKind::kStuff});
  std::uint16_t id = 1;
  for (int i = 0; i < n_things; ++i, ++id) {
    std::string name = i < 8 ? kThingNames[i] : "thing" + std::to_string(i);
    t.classes.push_back({id, name, ClassKind::kThing});
  }
  for (int i = 0; i < n_stuffs; ++i, ++id) {
    std::string name = i < 8 ? kStuffNames[i] : "stuff" + std::to_string(i);
    t.classes.push_back({id, name, ClassKind::kStuff});
  }
  return t;
}

}  // namespace casnet
