#ifndef RELREWARD_SYNTH_HPP_
#define RELREWARD_SYNTH_HPP_

#include "relreward/synth/client.hpp"
#include "relreward/synth/extract.hpp"
#include "relreward/synth/pipeline.hpp"
#include "relreward/synth/prompts.hpp"

#endif  // RELREWARD_SYNTH_HPP_
