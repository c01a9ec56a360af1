#!/usr/bin/env python3
"""Write the recorded-outcome replay traces under data/replay/<model>/<id>.trace.

Each trace is one completion per line: the Host Agent's plan first, then one
App Agent decision per round. Each script yields a fixed verdict and step
count per scenario for both recorded models.
"""
import json
import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent
OUT = ROOT / "data" / "replay"


def fwd(d): return ("car_forward", "distance", d)
def back(d): return ("car_back", "distance", d)
def left(a): return ("car_left", "angle", a)
def right(a): return ("car_right", "angle", a)
def cam(p): return ("camera_move", "pitch", p)
def buzz(s=1.0): return ("buzzer", "duration", s)


def host(plan):
    return {"observation": "Looking around the starting position.",
            "thoughts": "Split the request into steps the robot can execute one at a time.",
            "plan": plan, "comment": "Plan ready."}


def app_step(i, cmd):
    name, arg, val = cmd
    return {"observation": f"Round {i} view.", "comment": f"Executing {name}.",
            "status": "CONTINUE", "command": {"name": name, "args": {arg: val}}}


def app_finish(comment):
    return {"observation": "Checking the result.", "comment": comment, "status": "FINISH"}


def trace(plan, cmds, final):
    lines = [host(plan)] + [app_step(i, c) for i, c in enumerate(cmds)]
    if final is not None:
        lines.append(app_finish(final))
    return lines


PLAN = ["Observe the surroundings", "Carry out the request", "Report the result"]

TURBO = {
    "od_1": ([left(90), left(90), fwd(0.3), fwd(0.3), fwd(0.2), cam(10)],
             "The refrigerator is right in front of me."),
    "od_2": ([left(20)] * 4 + [cam(20), cam(0), right(10), left(5)],
             "A person is standing to my left and I am now facing them."),
    "od_3": ([left(90), right(90)] * 10, None),
    "od_4": ([fwd(0.3)] * 3 + [buzz()], "Reached the rectangular object and sounded the buzzer."),
    "od_5": ([], "The yellow obstacle says: CAUTION: WET FLOOR"),
    "cmd_1": ([fwd(0.6), left(90), fwd(0.6), left(90), fwd(0.6)], "Completed the square."),
    "cmd_2": ([cam(20), cam(40), cam(45)], "The face: smiling, short brown hair, round glasses."),
    "cmd_3": ([left(360)], "Rotated twice on the spot."),
    "cmd_4": ([left(30), fwd(1.0), right(60), fwd(1.0), left(30)], "Finished the zigzag."),
    "cmd_5": ([cam(10), cam(0)] + [back(0.4), buzz()] * 5, "Backed up and beeped five times."),
    "nav_1": ([left(90), right(90)] * 8, "Moved forward past the obstacles."),
    "nav_2": ([fwd(0.4), fwd(0.4), buzz(), fwd(0.5), fwd(0.5), left(90), fwd(0.5), fwd(0.5)],
              "Covered 2 meters, beeping at the obstacle."),
    "nav_3": ([left(30), right(30)] * 7 + [buzz()], "Found the bosch box."),
    "nav_4": ([left(90)] * 4 + [fwd(1.0)], "Rotated and moved 1 meter toward the open side."),
    "nav_5": ([fwd(0.5), buzz(), cam(0)], "Stopped behind the object and sounded the buzzer."),
    "sa_1": ([], "The object in front is a red box with a square outline."),
    "sa_2": ([left(30)] * 4 + [right(30), cam(0)], "남색 상자가 하나 보입니다."),
    "sa_3": ([fwd(0.5), left(20), right(20)], "The name of the box is ACME."),
    "sa_4": ([fwd(1.0), fwd(0.5), cam(0)], "The paper says: HELLO ROBOT"),
    "sa_5": ([fwd(0.2), cam(20), cam(0), left(10)],
             "The paper names the Ministry of Science, ICT and Future Planning but I cannot find a contact."),
}

GPT4O = {
    "od_1": ([left(45)] * 4 + [fwd(0.25)] * 3 + [cam(20), cam(0)], "The refrigerator is right in front of me."),
    "od_2": ([left(30), left(30), cam(10), cam(0)], "There is a person to my left."),
    "od_3": ([left(45)] * 3 + [fwd(0.5)] * 4 + [cam(30), cam(0), buzz(0.5), left(10)],
             "I found a person in a red shirt nearby."),
    "od_4": ([fwd(0.9), buzz()], "Reached the rectangular object and sounded the buzzer."),
    "od_5": ([], "The yellow obstacle says: CAUTION: WET FLOOR"),
    "cmd_1": ([fwd(0.6), left(90)] * 4 + [cam(0)], "Completed the 0.6 m square."),
    "cmd_2": ([cam(20), cam(40), cam(45)], "The face: smiling, short brown hair, round glasses."),
    "cmd_3": ([left(90)] * 8, "Rotated twice on the spot."),
    "cmd_4": ([left(30), fwd(0.5), right(60), fwd(0.5), left(60), fwd(0.5), right(60), fwd(0.5), left(30), cam(0)],
              "Finished the zigzag."),
    "cmd_5": ([cam(10), cam(0)] + [back(0.4), buzz()] * 5, "Backed up and beeped five times."),
    "nav_1": ([fwd(0.5), left(45), fwd(0.57), right(45), fwd(1.2), right(45), fwd(0.57)],
              "Passed the obstacles and kept going forward."),
    "nav_2": ([fwd(1.0), buzz(), fwd(1.0), left(90), fwd(0.5)], "Covered 2 meters, beeping at the obstacle."),
    "nav_3": ([left(45), fwd(0.57), right(45), fwd(0.9), right(90), fwd(0.4), left(90), cam(10)],
              "I found the BOSCH box."),
    "nav_4": ([left(30)] * 12 + [right(90), left(45), fwd(0.3)], "Moved toward the open side."),
    "nav_5": ([left(90), fwd(0.5), right(90), fwd(1.0), buzz()], "Stopped behind the object and sounded the buzzer."),
    "sa_1": ([], "The object in front is a red box with a square outline."),
    "sa_2": ([left(60)] * 6 + [cam(0)], "남색 상자가 왼쪽에 있습니다."),
    "sa_3": ([fwd(0.25), fwd(0.25), left(30), right(60), left(30), cam(15), cam(0)], "The name of the box is ACME."),
    "sa_4": ([fwd(0.2)] * 10, "The paper says: HELLO ROBOT"),
    "sa_5": ([], "The contact number is 02-555-0123."),
}


def main():
    out = pathlib.Path(sys.argv[1]) if len(sys.argv) > 1 else OUT
    for model, table in (("gpt-4-turbo", TURBO), ("gpt-4o", GPT4O)):
        d = out / model
        d.mkdir(parents=True, exist_ok=True)
        for sid, (cmds, final) in table.items():
            lines = trace(PLAN, cmds, final)
            text = "".join(json.dumps(x, ensure_ascii=False) + "\n" for x in lines)
            (d / f"{sid}.trace").write_text(text, encoding="utf-8")


if __name__ == "__main__":
    main()
