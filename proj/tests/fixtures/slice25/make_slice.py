"""Writes slice.json: 25 HotpotQA-layout bridge questions over an invented world."""
import json
import pathlib

FIRST = ["Aldo", "Berit", "Casimir", "Dagny", "Emil", "Freja", "Gustav", "Hedda", "Ivar", "Johanna",
         "Kasper", "Liv", "Magnus", "Nora", "Otto", "Petra", "Rune", "Sigrid", "Tor", "Ulla",
         "Vidar", "Wilma", "Yngve", "Zelda", "Axel"]
LAST = ["Arnfeld", "Brom", "Corvin", "Dahlquist", "Eskeland", "Falk", "Grell", "Holm", "Isaksen", "Jarl",
        "Kvist", "Lund", "Moberg", "Nyman", "Orre", "Palm", "Quist", "Rask", "Stam", "Tell",
        "Ulvang", "Vinge", "Wahl", "Ystad", "Zorn"]
CITY = ["Arvika", "Brennholt", "Castrum", "Dorvale", "Elmshire", "Frostvik", "Greyhaven", "Hollin", "Istergard", "Jorvale",
        "Kaldmark", "Lorwick", "Mossdal", "Norhaven", "Ostervik", "Pellmark", "Quarrow", "Rivenby", "Saltmere", "Thornvik",
        "Umberly", "Valdheim", "Westmarch", "Yarrowby", "Zennor"]
COUNTRY = ["Norland", "Estavia", "Carpathe", "Valdoria", "Meridia"]
WORK = ["Glass Orchard", "Iron Psalm", "Velvet Tide", "Hollow Crown", "Amber Road", "Night Ferry", "Paper Moon",
        "Salt Garden", "Winter Loom", "Copper Sky", "Silent Quarry", "Red Lantern", "Stone Choir", "Blue Meridian",
        "Distant Bells", "Ash Meadow", "Broken Compass", "Golden Weir", "Pale Harbor", "Rusted Crown",
        "Cedar Hymn", "Frozen Delta", "Scarlet Mill", "Quiet Engine", "Last Orchard"]
KIND = ["novel", "opera", "film", "symphony", "play"]


def main():
    records = []
    chains = []
    for i in range(25):
        person = f"{FIRST[i]} {LAST[i]}"
        chains.append({
            "work": WORK[i], "person": person, "city": CITY[i], "country": COUNTRY[i % 5],
            "paras": [
                [WORK[i], [f"{WORK[i]} is a {KIND[i % 5]} by {person}.", f"{WORK[i]} premiered in {1950 + i}."]],
                [person, [f"{person} was born in {CITY[i]}.", f"{person} studied music and letters."]],
                [CITY[i], [f"{CITY[i]} is a river town in {COUNTRY[i % 5]}.", f"{CITY[i]} has a population of {1000 * (i + 3)}."]],
            ],
        })
    for i, c in enumerate(chains):
        distractor = chains[(i + 7) % 25]["paras"][1]
        if i % 2 == 0:
            question = f"What is the birthplace of the creator of {c['work']}?"
            answer = c["city"]
            support = [[c["work"], 0], [c["person"], 0]]
        else:
            question = f"In which country is the birthplace of {c['person']}?"
            answer = c["country"]
            support = [[c["person"], 0], [c["city"], 0]]
        records.append({
            "_id": f"s{i + 1:02d}",
            "question": question,
            "answer": answer,
            "type": "bridge",
            "supporting_facts": support,
            "context": c["paras"] + [distractor],
        })
    out = pathlib.Path(__file__).with_name("slice.json")
    out.write_text("\n".join(["["] + [json.dumps(r) + ("," if n + 1 < len(records) else "") for n, r in enumerate(records)] + ["]"]) + "\n")


if __name__ == "__main__":
    main()
