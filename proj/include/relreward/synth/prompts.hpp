#ifndef RELREWARD_SYNTH_PROMPTS_HPP_
#define RELREWARD_SYNTH_PROMPTS_HPP_

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "relreward/object_model.hpp"

namespace relreward::synth {

enum class TemplateId { kSystem, kDirect, kRelationalFunctions, kRelationalReward, kRescale };

inline const char* template_name(TemplateId id) {
  switch (id) {
    case TemplateId::kSystem: return "system";
    case TemplateId::kDirect: return "direct";
    case TemplateId::kRelationalFunctions: return "relational_functions";
    case TemplateId::kRelationalReward: return "relational_reward";
    case TemplateId::kRescale: return "rescale";
  }
  return "?";
}

inline TemplateId template_from_name(std::string_view name) {
  for (auto id : {TemplateId::kSystem, TemplateId::kDirect, TemplateId::kRelationalFunctions,
                  TemplateId::kRelationalReward, TemplateId::kRescale}) {
    if (name == template_name(id)) return id;
  }
  throw std::invalid_argument("unknown template '" + std::string(name) + "'");
}

// The published prompt texts, byte for byte. The Python code-shape block is
// swapped for dsl_block() at render time.
inline std::string_view raw_template(TemplateId id) {
  switch (id) {
    case TemplateId::kSystem:
      return R"txt(You are a helpful assistant that creates reward functions for reinforcement learning researchers.)txt";
    case TemplateId::kDirect:
      return R"txt(We want to create a object centric reward function to train a reinforcement learning agent to play the game <GAME>. Here is a description of the game and its objects:

<PARENT GAME OBJECT CLASS> 

<GAME OBJECT CLASSES> 

The game instructions are the following: 
 <INSTRUCTIONS> 

Please provide a Python file with a reward function that uses a list of objects of type GameObject as input that will help the agent to play the game, i.e.:
```python
def reward_function(game_objects) -> float:
    ... 
    return reward
```

Do not use undefined variables or functions. Do not give any textual explanations, just generate the python code. If you give an explanation, please provide it in the form of a comment in the code.)txt";
    case TemplateId::kRelationalFunctions:
      return R"txt(We want to create a reward function for playing the Atari game <GAME>. As a first step we want to collect functions that are helpful for understanding events that are happening in the game that could be relevant for the reward, i.e., items colliding. In the following there will be existing game objects given, please generate functions that can be used to understand the game state. Please don't use undefined variables or functions. 

Here is a description of the game and its objects:

<PARENT GAME OBJECT CLASS> 

<GAME OBJECT CLASSES> 

The game instructions are the following: 
 <INSTRUCTIONS> )txt";
    case TemplateId::kRelationalReward:
      return R"txt(Now please create a object centric reward function to train a reinforcement learning agent to play the game <GAME>. The reward function uses a list of objects of type GameObject as input, i.e.:
```python
def reward_function(game_objects) -> float:
    ... 
    return reward
```
You can use the identified functions from before. Please don't use other undefined variables or functions.
 <INSTRUCTIONS> )txt";
    case TemplateId::kRescale:
      return R"txt("Thank you. Now please adjust the rewards so that the rewards are in the range [-1, 1].")txt";
  }
  throw std::invalid_argument("unknown template");
}

inline constexpr std::string_view kPythonShape =
    "```python\ndef reward_function(game_objects) -> float:\n    ... \n    return reward\n```";

// Restates the code-shape requirement for the reward language. Replaces
// kPythonShape in the direct and relational_reward prompts and is appended
// (after a blank line) to relational_functions, which has no shape block.
inline std::string_view dsl_block() {
  return R"txt(```rw
def helper_name(a: obj, b: obj) -> bool:
  <expression>

reward(objects):
  <expression>
```
Write the code in the following reward language instead of Python and put it in a single ```rw code block.
- A program is a list of helper definitions followed by one `reward(objects):` entry point. `objects` is the objlist of game objects; the entry point returns a float. Every body is a single expression; there are no statements, loops, assignments or recursion.
- Types: float, int, bool, str, obj, objlist, opt (an obj that may be missing), pair (two floats).
- Object fields: category, x, y, w, h, prev_x, prev_y, dx, dy, orientation, value, prev_value, value_diff, red, green, blue, hud. (x, y) is the top-left corner and y grows downwards.
- Expressions: numbers, "strings", true, false, + - * /, == != < <= > >=, and, or, not, `if c then a else b`, `let name = e in body`, pairs `(a, b)`, calls to helpers and builtins. Lambdas `o => e` and `(a, b) => e` may only be passed to builtins.
- Builtins: overlaps(a, b), corner_in(a, b), manhattan(a, b), center_x(o), center_y(o), center(o), nearest(o, objs), clamp(v, lo, hi), abs(v), min(a, b), max(a, b), filter_category(objs, "Name"), filter(objs, o => cond), concat(xs, ys), sort_by(objs, o => key), count(objs), exists(objs, o => cond), forall(objs, o => cond), sum_over(objs, o => v), min_over(objs, o => v), max_over(objs, o => v), sum_pairs(objs, (a, b) => v), first(objs), last(objs), is_some(m), unwrap(m), fst(p), snd(p).
- `#` starts a comment.)txt";
}

// Game instructions, verbatim (trailing spaces included).
inline std::string_view game_description(const std::string& game) {
  if (game == "freeway") {
    return R"txt(You control a chicken that has to cross ten horizontal lanes of a freeway traffic.
There exist two chickens in the game, you control the left chicken, that starts at the bottom of the road and should go to the top.
Cars are traveling along the horizontal lanes and you should cross without getting run over by a car.
The screen height is 160.)txt";
  }
  if (game == "pong") {
    return R"txt(In this game the agent has to knock the ball past the enemy's paddle, situated on the left (good), and avoid letting the ball go past its paddle, on the right (bad). If the ball passes the paddle of the enemy, the agent gets a point. If the ball passes past the agents paddle, the enemy gets a point. After a scored point the ball continues moving behind the paddle for multiple frames before it respawns for a new round.)txt";
  }
  if (game == "seaquest") {
    return R"txt(You a sub (Player) able to move in all directions and fire torpedoes.
The goal is to retrieve as many divers as you can, while dodging and blasting enemy subs and killer sharks.
The game begins with one sub and three waiting on the horizon. Each time you increase your score by 10,000 points, an extra sub will be delivered to your base. 
Your sub will explode if it collides with anything except your divers.The sub has a limited amount of oxygen that decreases at a constant rate during the game. When the oxygen tank is almost empty, you need to surface and if you don't do it in time, your sub will blow up and you'll lose one diver. 
Each time you're forced to surface, with less than six divers, you lose one diver as well.)txt";
  }
  if (game == "skiing") {
    return R"txt(You control a skier (Player), going down a slope who can move sideways.
The Player is at the top of the screen, staying at the same y position but the other objects of the environments are moving up towards him. 
The goal is to ski in between the horizontal pairs of flags. 
There can be up to two pairs of poles on the screen.
Do not hit a tree or a flag or you'll fall and lose time.)txt";
  }
  throw std::invalid_argument("unknown game '" + game + "'");
}

inline std::string game_display_name(const std::string& game) {
  if (game == "freeway") return "Freeway";
  if (game == "pong") return "Pong";
  if (game == "seaquest") return "Seaquest";
  if (game == "skiing") return "Skiing";
  throw std::invalid_argument("unknown game '" + game + "'");
}

// The (elided) parent object class shown to the model, verbatim.
inline std::string_view parent_class_text() {
  return R"txt(    class GameObject:
    """
    The Parent Class of every detected object in the Atari games (RAM Extraction mode)

    #elided#
    """

    GET_COLOR = False
    GET_WH = False

    def __init__(self):
        self.rgb = (0, 0, 0)
        self._xy = (0, 0)
        self.wh = (0, 0)
        self._prev_xy = None
        self._orientation = None
        self.hud = False

    def __repr__(self):
        return f"{self.__class__.__name__} at ({self._xy[0]}, {self._xy[1]}), {self.wh}"

    @property
    def category(self):
        return self.__class__.__name__

    @property
    def x(self):
        return self._xy[0]

    @property
    def y(self):
        return self._xy[1]

    #elided

    def _save_prev(self):
        self._prev_xy = self._xy

    # @x.setter
    # def x(self, x):

    #     self._xy = x, self.xy[1]
    
    # @y.setter
    # def y(self, y):
    #     self._xy = self.xy[0], y

    @property
    def orientation(self):
        return self._orientation

    @orientation.setter
    def orientation(self, o):
        self._orientation = o

    @property
    def center(self):
        return self._xy[0] + self.wh[0]/2, self._xy[1] + self.wh[1]/2

    def is_on_top(self, other):
        """
        Returns ``True`` if this and another gameobject overlap.

        :return: True if objects overlap
        :rtype: bool
        """
        return (other.x <= self.x <= other.x + other.w) and \
            (other.y <= self.y <= other.y + other.h) 
    
    def manathan_distance(self, other):
        """
        Returns the manathan distance between the center of both objects.

        :return: True if objects overlap
        :rtype: bool
        """
        c0, c1 = self.center, other.center
        return abs(c0[0] - c1[0]) + abs(c0[1]- c1[1])
    
    def closest_object(self, others):
        """
        Returns the closest object from others, based on manathan distance between the center of both objects.

        :return: (Index, Object) from others
        :rtype: int
        """
        if len(others) == 0:
            return None
        return min(enumerate(others), key=lambda item: self.manathan_distance(item[1]))


class ValueObject(GameObject):
    """
    This class represents a game object that incorporates any notion of a value.
    For example:
    * the score of the player (or sometimes Enemy).
    * the level of useable/deployable resources (oxygen bars, ammunition bars, power gauges, etc.)
    * the clock/timer

    :ivar value: The value of the score.
    :vartype value: int
    """

    def __init__(self):
        super().__init__()
        self._value = 0
        self._prev_value = None

    @property
    def value(self):
        return self._value

    @value.setter
    def value(self, value):
        self._value = None if value is None else int(value)

    @property
    def prev_value(self):
        if self._prev_value is not None:
            return self._prev_value
        else:
            return self._value

    def _save_prev(self):
        super()._save_prev()
        self._prev_value = self._value

    @property
    def value_diff(self):
        return self.value - self.prev_value)txt";
}

// Reward-visible categories of a game as class listings in the style of the
// published Pong example. HUD objects (scores, clocks, lives) are left out.
inline std::string game_object_classes(const std::string& game) {
  std::string out;
  for (const auto& c : schema_for(game).categories) {
    if (c.hud) continue;
    if (!out.empty()) out += "\n\n\n";
    out += "class " + c.name + (c.has_value ? "(ValueObject)" : "(GameObject)") + ":\n";
    out += "    \"\"\"\n    " + c.doc + "\n    \"\"\"\n\n";
    out += "    def __init__(self):\n        super().__init__()\n        self._xy = 0, 0\n";
    out += "        self.wh = " + std::to_string(static_cast<int>(c.w)) + ", " +
           std::to_string(static_cast<int>(c.h)) + "\n";
    out += "        self.rgb = " + std::to_string(c.rgb[0]) + ", " + std::to_string(c.rgb[1]) +
           ", " + std::to_string(c.rgb[2]);
  }
  return out;
}

// Values for the four placeholders; an empty field leaves its placeholder
// unsubstituted, which render_prompt() rejects.
struct PromptInputs {
  std::string game;            // <GAME>, display name
  std::string instructions;    // <INSTRUCTIONS>
  std::string parent_class;    // <PARENT GAME OBJECT CLASS>
  std::string object_classes;  // <GAME OBJECT CLASSES>
};

inline PromptInputs prompt_inputs_for(const std::string& game) {
  return {game_display_name(game), std::string(game_description(game)),
          std::string(parent_class_text()), game_object_classes(game)};
}

// Single left-to-right pass, so substituted text is never rescanned.
inline std::string render_prompt(TemplateId id, const PromptInputs& in) {
  std::string t(raw_template(id));
  if (id == TemplateId::kDirect || id == TemplateId::kRelationalReward) {
    auto pos = t.find(kPythonShape);
    if (pos == std::string::npos) throw std::logic_error("template lost its code-shape block");
    t.replace(pos, kPythonShape.size(), dsl_block());
  } else if (id == TemplateId::kRelationalFunctions) {
    t += "\n\n";
    t += dsl_block();
  }
  const std::pair<std::string_view, const std::string*> slots[] = {
      {"<GAME>", &in.game},
      {"<INSTRUCTIONS>", &in.instructions},
      {"<PARENT GAME OBJECT CLASS>", &in.parent_class},
      {"<GAME OBJECT CLASSES>", &in.object_classes},
  };
  std::string out;
  out.reserve(t.size() + in.parent_class.size() + in.object_classes.size());
  for (std::size_t i = 0; i < t.size();) {
    bool hit = false;
    for (const auto& [name, value] : slots) {
      if (std::string_view(t).substr(i, name.size()) != name) continue;
      if (value->empty()) {
        throw std::invalid_argument("placeholder unsubstituted: " + std::string(name) + " in " +
                                    template_name(id) + " prompt");
      }
      out += *value;
      i += name.size();
      hit = true;
      break;
    }
    if (!hit) out += t[i++];
  }
  return out;
}

inline std::string render_prompt(TemplateId id, const std::string& game) {
  return render_prompt(id, prompt_inputs_for(game));
}

}  // namespace relreward::synth

#endif  // RELREWARD_SYNTH_PROMPTS_HPP_
