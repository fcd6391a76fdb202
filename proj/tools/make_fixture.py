#!/usr/bin/env python3
"""Generate the bundled O*NET-style fixture under data/fixture/.

The fixture is synthetic: occupation titles, task statements, skill links and
automation probabilities are sampled from a seeded generative model that mimics
the structure of the O*NET text tables (SOC major groups, task statements built
from routine and non-routine activity vocabularies, skill elements drawn from
the Skills, Knowledge, Abilities and Work Styles element sets). Running this
script twice produces byte-identical files.

Usage: python3 tools/make_fixture.py [--out data/fixture]
"""

import argparse
import csv
import hashlib
import json
import math
import os
import random

SEED = 20221016
GENERATOR_VERSION = "1.1.0"

TARGET_OCCUPATIONS = 910
TARGET_SKILLS = 135
TARGET_EDGES = 13222
LABELS_PER_CLASS = 56
MAX_LINKS = 35
MIN_LINKS = 3

# How strongly the latent automation probability shows through in task text
# (share of routine-activity statements) and in skill links.
TEXT_SIGNAL = 0.4
LINK_SIGNAL = 2.4

# (code, name, occupation count, base automation probability)
MAJOR_GROUPS = [
    ("11", "Management", 50, 0.18),
    ("13", "Business and Financial Operations", 56, 0.45),
    ("15", "Computer and Mathematical", 36, 0.30),
    ("17", "Architecture and Engineering", 62, 0.28),
    ("19", "Life, Physical, and Social Science", 58, 0.25),
    ("21", "Community and Social Service", 18, 0.08),
    ("23", "Legal", 10, 0.35),
    ("25", "Educational Instruction and Library", 58, 0.08),
    ("27", "Arts, Design, Entertainment, Sports, and Media", 50, 0.25),
    ("29", "Healthcare Practitioners and Technical", 80, 0.15),
    ("31", "Healthcare Support", 22, 0.40),
    ("33", "Protective Service", 28, 0.40),
    ("35", "Food Preparation and Serving Related", 16, 0.75),
    ("37", "Building and Grounds Cleaning and Maintenance", 10, 0.60),
    ("39", "Personal Care and Service", 32, 0.40),
    ("41", "Sales and Related", 24, 0.72),
    ("43", "Office and Administrative Support", 56, 0.85),
    ("45", "Farming, Fishing, and Forestry", 14, 0.72),
    ("47", "Construction and Extraction", 58, 0.55),
    ("49", "Installation, Maintenance, and Repair", 50, 0.55),
    ("51", "Production", 81, 0.82),
    ("53", "Transportation and Material Moving", 41, 0.75),
]

# Occupations whose titles appear in the declining-employment list, with a
# fixed latent automation probability.
ANCHORS = [
    ("43-4071.00", "File Clerks", 0.97),
    ("43-9022.00", "Word Processors and Typists", 0.96),
    ("43-3051.00", "Payroll and Timekeeping Clerks", 0.95),
    ("43-9021.00", "Data Entry Keyers", 0.97),
    ("43-4051.00", "Customer Service Representatives", 0.08),
    ("15-1251.00", "Computer Programmers", 0.09),
    ("51-9061.00", "Inspectors, Testers, Sorters, Samplers, and Weighers", 0.10),
    ("41-2011.00", "Cashiers", 0.94),
    ("43-6014.00", "Secretaries and Administrative Assistants", 0.93),
    ("43-6011.00", "Executive Secretaries and Executive Administrative Assistants", 0.86),
    ("43-3031.00", "Bookkeeping, Accounting, and Auditing Clerks", 0.97),
    ("43-9061.00", "Office Clerks, General", 0.95),
    ("43-2011.00", "Switchboard Operators, Including Answering Service", 0.96),
    ("43-3071.00", "Tellers", 0.98),
    ("41-9041.00", "Telemarketers", 0.99),
    ("51-2092.00", "Team Assemblers", 0.97),
    ("43-4151.00", "Order Clerks", 0.98),
    ("43-9051.00", "Mail Clerks and Mail Machine Operators, Except Postal Service", 0.95),
    ("41-2022.00", "Parts Salespersons", 0.96),
    ("41-9091.00", "Door-to-Door Sales Workers, News and Street Vendors", 0.94),
    ("43-6012.00", "Legal Secretaries and Administrative Assistants", 0.98),
    ("31-9094.00", "Medical Transcriptionists", 0.93),
    ("51-9151.00", "Photographic Process Workers and Processing Machine Operators", 0.95),
    ("43-4131.00", "Loan Interviewers and Clerks", 0.96),
    ("43-9041.00", "Insurance Claims and Policy Processing Clerks", 0.98),
    ("43-5061.00", "Production, Planning, and Expediting Clerks", 0.88),
    ("51-4031.00", "Cutting, Punching, and Press Machine Setters, Operators, and Tenders", 0.93),
    ("43-4111.00", "Interviewers, Except Eligibility and Loan", 0.94),
    ("43-2021.00", "Telephone Operators", 0.97),
    ("41-9022.00", "Real Estate Brokers", 0.90),
    ("13-2041.00", "Credit Analysts", 0.93),
    ("13-2053.00", "Insurance Underwriters", 0.97),
    ("13-1032.00", "Insurance Appraisers, Auto Damage", 0.92),
    ("17-2051.01", "Transportation Engineers", 0.60),
    ("13-2081.00", "Tax Examiners and Collectors, and Revenue Agents", 0.93),
    ("29-1141.00", "Registered Nurses", 0.01),
    ("25-2021.00", "Elementary School Teachers, Except Special Education", 0.004),
    ("21-1014.00", "Mental Health Counselors", 0.005),
    ("11-1011.00", "Chief Executives", 0.015),
]

# Titles of the declining-employment list (29 entries). Three of them are
# occupations whose automation probability is low.
DECLINING = [
    ("Cashiers", "41-2011.00", -335.8),
    ("Secretaries and Administrative Assistants", "", -240.3),
    ("Executive Secretaries and Executive Administrative Assistants", "43-6011.00", -197.4),
    ("Customer Service Representatives", "43-4051.00", -139.0),
    ("Bookkeeping, Accounting, and Auditing Clerks", "43-3031.00", -105.6),
    ("Office Clerks, General", "", -94.7),
    ("Data Entry Keyers", "43-9021.00", -46.9),
    ("Word Processors and Typists", "", -27.2),
    ("File Clerks", "43-4071.00", -12.6),
    ("Switchboard Operators, Including Answering Service", "43-2011.00", -14.9),
    ("Tellers", "43-3071.00", -62.3),
    ("Telemarketers", "", -21.5),
    ("Team Assemblers", "51-2092.00", -78.2),
    ("Order Clerks", "43-4151.00", -19.6),
    ("Computer Programmers", "15-1251.00", -19.0),
    ("Payroll and Timekeeping Clerks", "43-3051.00", -16.7),
    ("Mail Clerks and Mail Machine Operators, Except Postal Service", "", -13.0),
    ("Parts Salespersons", "41-2022.00", -11.8),
    ("Door-to-Door Sales Workers, News and Street Vendors", "", -10.2),
    ("Legal Secretaries and Administrative Assistants", "43-6012.00", -45.1),
    ("Medical Transcriptionists", "31-9094.00", -5.9),
    ("Photographic Process Workers and Processing Machine Operators", "", -4.4),
    ("Loan Interviewers and Clerks", "43-4131.00", -13.4),
    ("Insurance Claims and Policy Processing Clerks", "", -20.9),
    ("Inspectors, Testers, Sorters, Samplers, and Weighers", "51-9061.00", -21.3),
    ("Production, Planning, and Expediting Clerks", "43-5061.00", -9.8),
    ("Cutting, Punching, and Press Machine Setters, Operators, and Tenders", "", -12.1),
    ("Interviewers, Except Eligibility and Loan", "43-4111.00", -8.7),
    ("Telephone Operators", "", -2.9),
]

SKILL_ELEMENTS = {
    # element-set prefix -> names
    "2.A": [  # Skills
        "Reading Comprehension", "Active Listening", "Writing", "Speaking",
        "Mathematics", "Science", "Critical Thinking", "Active Learning",
        "Learning Strategies", "Monitoring", "Social Perceptiveness",
        "Coordination", "Persuasion", "Negotiation", "Instructing",
        "Service Orientation", "Complex Problem Solving", "Operations Analysis",
        "Technology Design", "Equipment Selection", "Installation",
        "Programming", "Operations Monitoring", "Operation and Control",
        "Equipment Maintenance", "Troubleshooting", "Repairing",
        "Quality Control Analysis", "Judgment and Decision Making",
        "Systems Analysis", "Systems Evaluation", "Time Management",
        "Management of Financial Resources", "Management of Material Resources",
        "Management of Personnel Resources",
    ],
    "2.C": [  # Knowledge (Mathematics omitted: duplicates the skill element)
        "Administration and Management", "Administrative (Clerical)",
        "Economics and Accounting", "Sales and Marketing",
        "Customer and Personal Service", "Personnel and Human Resources",
        "Production and Processing", "Food Production",
        "Computers and Electronics", "Engineering and Technology", "Design",
        "Building and Construction", "Mechanical", "Physics", "Chemistry",
        "Biology", "Psychology", "Sociology and Anthropology", "Geography",
        "Medicine and Dentistry", "Therapy and Counseling",
        "Education and Training", "English Language", "Foreign Language",
        "Fine Arts", "History and Archeology", "Philosophy and Theology",
        "Public Safety and Security", "Law and Government", "Telecommunications",
        "Communications and Media", "Transportation",
    ],
    "1.A": [  # Abilities
        "Oral Comprehension", "Written Comprehension", "Oral Expression",
        "Written Expression", "Fluency of Ideas", "Originality",
        "Problem Sensitivity", "Deductive Reasoning", "Inductive Reasoning",
        "Information Ordering", "Category Flexibility", "Mathematical Reasoning",
        "Number Facility", "Memorization", "Speed of Closure",
        "Flexibility of Closure", "Perceptual Speed", "Spatial Orientation",
        "Visualization", "Selective Attention", "Time Sharing",
        "Arm-Hand Steadiness", "Manual Dexterity", "Finger Dexterity",
        "Control Precision", "Multilimb Coordination", "Response Orientation",
        "Rate Control", "Reaction Time", "Wrist-Finger Speed",
        "Speed of Limb Movement", "Static Strength", "Explosive Strength",
        "Dynamic Strength", "Trunk Strength", "Stamina", "Extent Flexibility",
        "Dynamic Flexibility", "Gross Body Coordination",
        "Gross Body Equilibrium", "Near Vision", "Far Vision",
        "Visual Color Discrimination", "Night Vision", "Peripheral Vision",
        "Depth Perception", "Glare Sensitivity", "Hearing Sensitivity",
        "Auditory Attention", "Sound Localization", "Speech Recognition",
        "Speech Clarity",
    ],
    "1.C": [  # Work Styles
        "Achievement/Effort", "Persistence", "Initiative", "Leadership",
        "Cooperation", "Concern for Others", "Social Orientation",
        "Self-Control", "Stress Tolerance", "Adaptability/Flexibility",
        "Dependability", "Attention to Detail", "Integrity", "Independence",
        "Innovation", "Analytical Thinking",
    ],
}

ROUTINE_SKILLS = {
    "Administrative (Clerical)", "Number Facility", "Perceptual Speed",
    "Finger Dexterity", "Wrist-Finger Speed", "Manual Dexterity",
    "Arm-Hand Steadiness", "Operation and Control", "Operations Monitoring",
    "Quality Control Analysis", "Production and Processing",
    "Attention to Detail", "Dependability", "Near Vision",
    "Information Ordering", "Equipment Maintenance", "Static Strength",
    "Stamina", "Control Precision", "Memorization", "Selective Attention",
    "Rate Control", "Mechanical", "Transportation", "Reaction Time",
    "Multilimb Coordination", "Monitoring", "Time Management",
    "Visual Color Discrimination", "Food Production", "Trunk Strength",
    "Repairing", "Speed of Limb Movement", "Customer and Personal Service",
    "Economics and Accounting", "Mathematics",
}
CREATIVE_SOCIAL_SKILLS = {
    "Social Perceptiveness", "Persuasion", "Negotiation", "Instructing",
    "Originality", "Fluency of Ideas", "Complex Problem Solving", "Leadership",
    "Concern for Others", "Therapy and Counseling", "Psychology",
    "Education and Training", "Fine Arts", "Innovation",
    "Management of Personnel Resources", "Judgment and Decision Making",
    "Coordination", "Medicine and Dentistry", "Sociology and Anthropology",
    "Philosophy and Theology", "Design", "Technology Design", "Systems Analysis",
    "Learning Strategies", "Inductive Reasoning", "Social Orientation",
    "Initiative", "Written Expression", "Science", "Biology",
    "Administration and Management", "Systems Evaluation",
    "Category Flexibility", "Adaptability/Flexibility", "Analytical Thinking",
    "Personnel and Human Resources",
}
COMMON_SKILLS = {
    "Reading Comprehension", "Active Listening", "Speaking", "Critical Thinking",
    "Oral Comprehension", "Oral Expression", "Problem Sensitivity",
    "Deductive Reasoning", "English Language", "Near Vision", "Speech Clarity",
    "Speech Recognition", "Dependability", "Integrity", "Cooperation",
    "Attention to Detail", "Written Comprehension", "Monitoring",
}

# Skill themes per major group (substring match on skill name).
GROUP_SKILL_THEMES = {
    "11": ["Management", "Administration", "Leadership", "Judgment", "Coordination"],
    "13": ["Economics", "Mathematics", "Law", "Number", "Analytical"],
    "15": ["Programming", "Computers", "Systems", "Mathemat", "Technology"],
    "17": ["Engineering", "Design", "Physics", "Mathemat", "Technology", "Building"],
    "19": ["Science", "Biology", "Chemistry", "Physics", "Inductive"],
    "21": ["Therapy", "Psychology", "Sociology", "Concern", "Social"],
    "23": ["Law", "Writing", "Negotiation", "Persuasion"],
    "25": ["Education", "Instructing", "Learning", "History", "Foreign"],
    "27": ["Fine Arts", "Design", "Communications", "Originality", "Fluency"],
    "29": ["Medicine", "Biology", "Therapy", "Chemistry", "Concern"],
    "31": ["Medicine", "Concern", "Service", "Customer"],
    "33": ["Public Safety", "Law", "Stress", "Strength", "Reaction"],
    "35": ["Food", "Service", "Customer", "Stamina"],
    "37": ["Strength", "Stamina", "Trunk", "Equipment"],
    "39": ["Service", "Customer", "Concern", "Social"],
    "41": ["Sales", "Persuasion", "Customer", "Negotiation"],
    "43": ["Clerical", "Number", "Perceptual", "Computers", "Detail"],
    "45": ["Biology", "Stamina", "Strength", "Geography"],
    "47": ["Building", "Strength", "Equipment", "Mechanical", "Installation"],
    "49": ["Repairing", "Troubleshooting", "Equipment", "Mechanical", "Installation"],
    "51": ["Production", "Operation", "Quality", "Dexterity", "Control"],
    "53": ["Transportation", "Operation", "Reaction", "Vision", "Multilimb"],
}

ROUTINE_VERBS = [
    "Record", "Compile", "Verify", "Sort", "Enter", "Operate", "Process",
    "File", "Type", "Calculate", "Inspect", "Assemble", "Load", "Monitor",
    "Count", "Weigh", "Stamp", "Copy", "Tabulate", "Package", "Label",
    "Measure", "Clean", "Transcribe", "Post", "Check", "Feed", "Adjust",
]
ROUTINE_OBJECTS = [
    "records", "invoices", "data", "forms", "documents", "payroll entries",
    "shipments", "materials", "orders", "receipts", "ledgers", "parts",
    "machine settings", "inventory counts", "reports", "account balances",
    "correspondence", "transactions", "labels", "production logs",
]
NONROUTINE_VERBS = [
    "Negotiate", "Counsel", "Design", "Develop", "Lead", "Advise", "Diagnose",
    "Teach", "Coordinate", "Evaluate", "Mentor", "Persuade", "Plan",
    "Direct", "Investigate", "Interpret", "Create", "Formulate", "Consult",
    "Supervise", "Research", "Assess", "Facilitate", "Motivate",
]
NONROUTINE_OBJECTS = [
    "clients", "patients", "students", "strategies", "research projects",
    "teams", "policies", "treatment plans", "community programs",
    "creative concepts", "partnerships", "curricula", "organizational goals",
    "complex problems", "therapy sessions", "innovations", "staff members",
    "stakeholders", "long-term plans", "novel solutions",
]
CONTEXT_TAILS = [
    "in accordance with established procedures", "using computer software",
    "to ensure accuracy", "according to organizational policy",
    "as required by regulations", "on a daily basis", "under supervision",
    "with other departments", "to meet deadlines", "using standard equipment",
    "for management review", "to maintain quality standards",
]

GROUP_DOMAIN = {
    "11": ["operations", "budgets", "business units", "executive programs", "corporate strategy"],
    "13": ["financial statements", "tax returns", "audits", "credit applications", "insurance claims"],
    "15": ["software systems", "databases", "computer networks", "algorithms", "statistical models"],
    "17": ["engineering drawings", "prototypes", "structural designs", "electrical systems", "survey sites"],
    "19": ["laboratory experiments", "field samples", "scientific studies", "chemical analyses", "ecosystems"],
    "21": ["social services", "family cases", "rehabilitation programs", "community outreach", "youth programs"],
    "23": ["legal cases", "court proceedings", "contracts", "case law", "legal documents"],
    "25": ["classrooms", "lesson plans", "library collections", "academic programs", "student assessments"],
    "27": ["artistic productions", "media content", "performances", "visual designs", "broadcasts"],
    "29": ["clinical care", "medical examinations", "patient records", "therapeutic procedures", "diagnostic tests"],
    "31": ["patient care", "medical supplies", "clinic rooms", "therapy equipment", "health records"],
    "33": ["security patrols", "emergency incidents", "public safety", "surveillance systems", "fire prevention"],
    "35": ["food orders", "kitchen equipment", "dining areas", "beverage stations", "food supplies"],
    "37": ["building interiors", "grounds", "cleaning equipment", "landscaping", "waste disposal"],
    "39": ["personal services", "recreation activities", "childcare", "grooming services", "travel arrangements"],
    "41": ["sales transactions", "merchandise", "customer accounts", "price quotations", "product displays"],
    "43": ["office files", "customer records", "billing statements", "mail", "scheduling systems"],
    "45": ["crops", "livestock", "timber", "fishing gear", "agricultural products"],
    "47": ["construction sites", "building materials", "drilling equipment", "concrete structures", "pipelines"],
    "49": ["mechanical equipment", "electrical wiring", "vehicle engines", "hydraulic systems", "industrial machinery"],
    "51": ["production lines", "machine tools", "assembled products", "metal workpieces", "processing equipment"],
    "53": ["vehicles", "freight", "cargo", "delivery routes", "material handling equipment"],
}

GROUP_TITLES = {
    "11": (["General", "Operations", "Marketing", "Financial", "Human Resources", "Sales", "Purchasing",
            "Compliance", "Facilities", "Logistics", "Quality", "Training", "Property", "Program",
            "Education", "Medical", "Construction", "Food Service", "Gaming", "Emergency"],
           ["Managers", "Directors", "Administrators", "Executives"]),
    "13": (["Budget", "Claims", "Compliance", "Cost", "Credit", "Financial", "Tax", "Loan", "Market Research",
            "Logistics", "Management", "Fundraising", "Training", "Risk", "Investment", "Procurement",
            "Appraisal", "Audit"], ["Analysts", "Specialists", "Officers", "Examiners", "Agents"]),
    "15": (["Software", "Database", "Network", "Computer Systems", "Information Security", "Web",
            "Data", "Statistical", "Operations Research", "Quality Assurance", "Cloud", "Geospatial"],
           ["Developers", "Analysts", "Architects", "Administrators", "Scientists", "Engineers"]),
    "17": (["Aerospace", "Civil", "Electrical", "Mechanical", "Chemical", "Industrial", "Materials",
            "Mining", "Nuclear", "Petroleum", "Marine", "Environmental", "Biomedical", "Surveying",
            "Mapping", "Drafting", "Robotics", "Manufacturing"], ["Engineers", "Technicians", "Drafters",
            "Technologists"]),
    "19": (["Soil", "Plant", "Animal", "Food", "Marine", "Atmospheric", "Chemical", "Materials",
            "Environmental", "Geological", "Social", "Economic", "Survey", "Forensic", "Nuclear",
            "Zoological", "Clinical Research"], ["Scientists", "Technicians", "Researchers", "Specialists"]),
    "21": (["Rehabilitation", "Substance Abuse", "Marriage and Family", "School", "Child Welfare",
            "Community Health", "Social", "Religious", "Probation"], ["Counselors", "Workers", "Specialists"]),
    "23": (["Trial", "Administrative Law", "Legal Support", "Title", "Court", "Arbitration"],
           ["Lawyers", "Judges", "Examiners", "Mediators"]),
    "25": (["Elementary", "Middle School", "Secondary", "Special Education", "Adult Literacy", "Art",
            "Biology", "Business", "Chemistry", "History", "Nursing", "Library", "Vocational",
            "Economics", "Physics", "Psychology"], ["Teachers", "Instructors", "Professors", "Librarians"]),
    "27": (["Art", "Film", "Fashion", "Graphic", "Interior", "Sound", "Camera", "Music", "Broadcast",
            "Multimedia", "Set", "Exhibit", "Floral", "Commercial"], ["Designers", "Directors", "Artists",
            "Editors", "Operators"]),
    "29": (["Family Medicine", "Pediatric", "Cardiovascular", "Radiologic", "Respiratory", "Occupational",
            "Physical", "Nuclear Medicine", "Surgical", "Dental", "Orthotic", "Nurse", "Emergency Medical",
            "Pharmacy", "Dietetic", "Ophthalmic", "Neurodiagnostic", "Acute Care", "Clinical"],
           ["Physicians", "Therapists", "Technologists", "Practitioners", "Technicians"]),
    "31": (["Home Health", "Nursing", "Physical Therapist", "Occupational Therapist", "Medical", "Dental",
            "Pharmacy", "Veterinary", "Massage"], ["Aides", "Assistants", "Therapists"]),
    "33": (["Police", "Fire", "Correctional", "Security", "Transit", "Fish and Game", "Crossing",
            "Gaming Surveillance", "Detective"], ["Officers", "Inspectors", "Guards", "Supervisors"]),
    "35": (["Fast Food", "Restaurant", "Institution", "Short Order", "Counter", "Dining Room"],
           ["Cooks", "Attendants", "Workers", "Servers"]),
    "37": (["Janitorial", "Landscaping", "Pest Control", "Tree Trimming", "Housekeeping"],
           ["Workers", "Cleaners", "Supervisors"]),
    "39": (["Childcare", "Fitness", "Recreation", "Hair", "Skincare", "Funeral", "Tour", "Animal Care",
            "Personal Care", "Concierge"], ["Workers", "Attendants", "Specialists", "Guides"]),
    "41": (["Retail", "Wholesale", "Insurance Sales", "Securities", "Advertising Sales", "Travel",
            "Counter Rental", "Demonstrator"], ["Salespersons", "Agents", "Representatives", "Clerks"]),
    "43": (["Billing", "Brokerage", "Correspondence", "Court", "Credit", "Eligibility", "Hotel Desk",
            "Library", "Procurement", "Shipping", "Statement", "Stock", "Account", "Records",
            "Receiving", "Dispatch"], ["Clerks", "Assistants", "Operators", "Dispatchers"]),
    "45": (["Agricultural", "Farmworkers", "Forest", "Fishing", "Graders", "Animal Breeding"],
           ["Workers", "Operators", "Sorters"]),
    "47": (["Brick", "Carpentry", "Concrete", "Drywall", "Electrical", "Glazier", "Insulation",
            "Paving", "Pipelaying", "Plumbing", "Roofing", "Sheet Metal", "Structural Iron", "Tile",
            "Drilling", "Excavating"], ["Workers", "Installers", "Operators", "Helpers"]),
    "49": (["Avionics", "Automotive", "Bus and Truck", "Electrical Power", "HVAC", "Industrial Machinery",
            "Locksmith", "Medical Equipment", "Telecommunications", "Wind Turbine", "Elevator",
            "Signal and Track", "Appliance"], ["Mechanics", "Repairers", "Installers", "Technicians"]),
    "51": (["Bakers", "Butchers", "Machine Feeders", "Cutting Machine", "Extruding Machine",
            "Grinding", "Lathe", "Milling", "Molding", "Plating", "Welding", "Soldering", "Packaging",
            "Textile", "Sewing Machine", "Printing Press", "Woodworking", "Chemical Plant",
            "Semiconductor", "Paper Goods", "Coating", "Furnace", "Meat Packing", "Shoe Machine"],
           ["Operators", "Tenders", "Workers", "Setters"]),
    "53": (["Truck", "Bus", "Taxi", "Delivery", "Crane", "Forklift", "Conveyor", "Rail Yard",
            "Ship", "Parking", "Refuse", "Pump Station", "Cargo"], ["Drivers", "Operators", "Handlers",
            "Attendants"]),
}


def logit(p):
    return math.log(p / (1.0 - p))


def sigmoid(x):
    return 1.0 / (1.0 + math.exp(-x))


def build_skills():
    skills = []
    for prefix in ["2.A", "2.C", "1.A", "1.C"]:
        for i, name in enumerate(SKILL_ELEMENTS[prefix]):
            skills.append({"id": f"{prefix}.{i + 1:02d}", "name": name})
    assert len(skills) == TARGET_SKILLS, len(skills)
    for s in skills:
        if s["name"] in ROUTINE_SKILLS:
            s["affinity"] = 1.0
        elif s["name"] in CREATIVE_SOCIAL_SKILLS:
            s["affinity"] = -1.0
        else:
            s["affinity"] = 0.0
        s["common"] = s["name"] in COMMON_SKILLS
    return skills


def build_occupations(rng):
    anchors_by_group = {}
    for code, title, p in ANCHORS:
        anchors_by_group.setdefault(code[:2], []).append((code, title, p))
    occupations = []
    total = sum(g[2] for g in MAJOR_GROUPS)
    assert total == TARGET_OCCUPATIONS, total
    for group, _name, count, base in MAJOR_GROUPS:
        used_codes = set()
        used_titles = set()
        members = []
        for code, title, p in anchors_by_group.get(group, []):
            members.append({"soc": code, "title": title, "p": p, "group": group})
            used_codes.add(code)
            used_titles.add(title)
        qualifiers, roles = GROUP_TITLES[group]
        combos = [f"{q} {r}" for q in qualifiers for r in roles]
        rng.shuffle(combos)
        ci = 0
        while len(members) < count:
            if ci < len(combos):
                title = combos[ci]
                ci += 1
            else:
                q1, q2 = rng.sample(qualifiers, 2)
                title = f"{q1} and {q2} {rng.choice(roles)}"
            if title in used_titles:
                continue
            while True:
                code = f"{group}-{rng.randint(1000, 9999)}.{rng.choice(['00', '00', '00', '01', '02'])}"
                if code not in used_codes:
                    break
            p = sigmoid(logit(base) + rng.gauss(0.0, 1.3))
            p = min(max(p, 0.003), 0.99)
            members.append({"soc": code, "title": title, "p": p, "group": group})
            used_codes.add(code)
            used_titles.add(title)
        occupations.extend(members)
    return occupations


def make_task(rng, occ, skill_names, text_signal):
    routine = rng.random() < 0.5 + text_signal * (occ["p"] - 0.5)
    verbs, objects = (ROUTINE_VERBS, ROUTINE_OBJECTS) if routine else (NONROUTINE_VERBS, NONROUTINE_OBJECTS)
    domain = rng.choice(GROUP_DOMAIN[occ["group"]])
    text = f"{rng.choice(verbs)} {rng.choice(objects)} related to {domain}"
    r = rng.random()
    if r < 0.35 and skill_names:
        text += f", applying {rng.choice(skill_names).lower()}"
    elif r < 0.75:
        text += f" {rng.choice(CONTEXT_TAILS)}"
    if rng.random() < 0.25:
        verbs2 = ROUTINE_VERBS if rng.random() < 0.5 + text_signal * (occ["p"] - 0.5) else NONROUTINE_VERBS
        text += f" and {rng.choice(verbs2).lower()} {rng.choice(objects)}"
    return text + "."


def sample_links(rng, occupations, skills, link_signal):
    n = len(occupations)
    degrees = [min(MAX_LINKS, max(MIN_LINKS, int(round(rng.gauss(14.5, 5.5))))) for _ in range(n)]
    degrees[rng.randrange(n)] = MAX_LINKS
    diff = TARGET_EDGES - sum(degrees)
    order = list(range(n))
    while diff != 0:
        i = rng.choice(order)
        if diff > 0 and degrees[i] < MAX_LINKS - 1:
            degrees[i] += 1
            diff -= 1
        elif diff < 0 and degrees[i] > MIN_LINKS and degrees[i] != MAX_LINKS:
            degrees[i] -= 1
            diff += 1
    links = []
    for occ, deg in zip(occupations, degrees):
        themes = GROUP_SKILL_THEMES[occ["group"]]
        a = 2.0 * occ["p"] - 1.0
        weights = []
        for s in skills:
            w = link_signal * a * s["affinity"] + rng.gauss(0.0, 0.6)
            if s["common"]:
                w += 1.4
            if any(t in s["name"] for t in themes):
                w += 1.8
            weights.append(math.exp(w))
        chosen = []
        pool = list(range(len(skills)))
        for _ in range(deg):
            tot = sum(weights[j] for j in pool)
            x = rng.random() * tot
            acc = 0.0
            for k, j in enumerate(pool):
                acc += weights[j]
                if acc >= x:
                    chosen.append(j)
                    pool.pop(k)
                    break
            else:
                chosen.append(pool.pop())
        occ["skills"] = sorted(chosen)
        links.extend((occ["soc"], skills[j]["id"]) for j in occ["skills"])
    # every skill must be linked at least once
    linked = {sid for _, sid in links}
    missing = [s for s in skills if s["id"] not in linked]
    for s in missing:
        # swap into the occupation whose degree is largest and not the max marker
        donor = max((o for o in occupations if len(o["skills"]) < MAX_LINKS), key=lambda o: len(o["skills"]))
        j = skills.index(s)
        drop = donor["skills"][-1]
        donor["skills"] = sorted([x for x in donor["skills"] if x != drop] + [j])
    links = [(o["soc"], skills[j]["id"]) for o in occupations for j in o["skills"]]
    assert len(links) == TARGET_EDGES, len(links)
    assert len({sid for _, sid in links}) == TARGET_SKILLS
    return links


def select_labels_balanced(occupations, lo=0.4, hi=0.6):
    """Round-robin over SOC major groups: each turn labels the group's most
    automatable remaining occupation (p >= hi) and its least automatable one
    (p <= lo), so class membership is not decided by occupation family alone."""
    declining = {t for t, _, _ in DECLINING}
    groups = {}
    for o in occupations:
        if o["title"] not in declining:
            groups.setdefault(o["group"], []).append(o)
    order = sorted(groups)
    high = {g: sorted([o for o in groups[g] if o["p"] >= hi], key=lambda o: (-o["p"], o["soc"])) for g in order}
    low = {g: sorted([o for o in groups[g] if o["p"] <= lo], key=lambda o: (o["p"], o["soc"])) for g in order}

    def take(pools):
        chosen = []
        while len(chosen) < LABELS_PER_CLASS and any(pools[g] for g in order):
            for g in order:
                if pools[g] and len(chosen) < LABELS_PER_CLASS:
                    chosen.append(pools[g].pop(0))
        return chosen

    return take(high), take(low)


def select_labels(occupations):
    """Top and bottom LABELS_PER_CLASS by probability, capped per major group."""
    cap = 9

    def pick(sorted_occs):
        chosen, per_group, seen_titles = [], {}, set()
        for o in sorted_occs:
            g = o["group"]
            key = o["title"].split()[-1]
            if per_group.get(g, 0) >= cap:
                continue
            if (g, key) in seen_titles and per_group.get(g, 0) >= cap // 2:
                continue
            chosen.append(o)
            per_group[g] = per_group.get(g, 0) + 1
            seen_titles.add((g, key))
            if len(chosen) == LABELS_PER_CLASS:
                break
        return chosen

    declining = {t for t, _, _ in DECLINING}
    candidates = [o for o in occupations if o["title"] not in declining]
    by_p = sorted(candidates, key=lambda o: (-o["p"], o["soc"]))
    automated = pick(by_p)
    non_automated = pick(list(reversed(by_p)))
    return automated, non_automated


def write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def sha256(path):
    h = hashlib.sha256()
    with open(path, "rb") as f:
        h.update(f.read())
    return h.hexdigest()


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=os.path.join(os.path.dirname(__file__), "..", "data", "fixture"))
    ap.add_argument("--text-signal", type=float, default=TEXT_SIGNAL)
    ap.add_argument("--link-signal", type=float, default=LINK_SIGNAL)
    ap.add_argument("--labels", choices=["extremes", "balanced"], default="balanced")
    args = ap.parse_args()
    out = os.path.abspath(args.out)
    os.makedirs(out, exist_ok=True)
    rng = random.Random(SEED)

    skills = build_skills()
    occupations = build_occupations(rng)
    links = sample_links(rng, occupations, skills, args.link_signal)
    name_of = {s["id"]: s["name"] for s in skills}

    tasks = []
    for o in occupations:
        n_tasks = max(6, min(24, int(round(rng.gauss(14.0, 4.0)))))
        names = [name_of[skills[j]["id"]] for j in o["skills"]]
        for _ in range(n_tasks):
            tasks.append((o["soc"], make_task(rng, o, names, args.text_signal)))

    # Occupations listed without task statements or without skill links; the
    # loader must exclude them from the graph.
    extra = [
        ("53-6099.00", "Transportation Workers, All Other", "no_tasks"),
        ("49-9099.00", "Installation, Maintenance, and Repair Workers, All Other", "no_tasks"),
        ("39-9099.00", "Personal Care and Service Workers, All Other", "no_tasks"),
        ("29-9099.00", "Healthcare Practitioners and Technical Workers, All Other", "no_links"),
        ("25-9099.00", "Educational Instruction and Library Workers, All Other", "no_links"),
    ]
    for soc, _title, kind in extra:
        if kind == "no_links":
            tasks.append((soc, "Perform duties as assigned by supervisors."))

    if args.labels == "balanced":
        automated, non_automated = select_labels_balanced(occupations)
    else:
        automated, non_automated = select_labels(occupations)

    occ_rows = [(o["soc"], o["title"]) for o in occupations] + [(s, t) for s, t, _ in extra]
    rng.shuffle(occ_rows)
    write_csv(os.path.join(out, "occupations.csv"), ["soc_code", "title"], occ_rows)
    write_csv(os.path.join(out, "task_statements.csv"), ["soc_code", "task_text"], tasks)
    write_csv(os.path.join(out, "skills.csv"), ["skill_id", "skill_name"], [(s["id"], s["name"]) for s in skills])
    write_csv(os.path.join(out, "occupation_skills.csv"), ["soc_code", "skill_id"], links)
    label_rows = sorted([(o["soc"], 1) for o in automated] + [(o["soc"], 0) for o in non_automated])
    write_csv(os.path.join(out, "labels.csv"), ["soc_code", "label"], label_rows)
    write_csv(os.path.join(out, "automation_probabilities.csv"), ["soc_code", "probability"],
              sorted((o["soc"], f"{o['p']:.4f}") for o in occupations))
    write_csv(os.path.join(out, "declining_occupations.csv"), ["title", "soc_code", "decline"],
              [(t, s, f"{d:.1f}") for t, s, d in DECLINING])

    files = ["occupations.csv", "task_statements.csv", "skills.csv", "occupation_skills.csv", "labels.csv",
             "automation_probabilities.csv", "declining_occupations.csv"]
    manifest = {
        "generator": "tools/make_fixture.py",
        "generator_version": GENERATOR_VERSION,
        "seed": SEED,
        "synthetic": True,
        "provenance": (
            "Synthetic O*NET-style snapshot. Skill nodes are the union of four O*NET element sets: "
            "Skills (35), Knowledge (32, Mathematics dropped as a duplicate of the Skills element), "
            "Abilities (52) and Work Styles (16). Occupation titles, task statements, links, "
            "automation probabilities and decline figures are generated, not copied from O*NET or BLS."
        ),
        "skill_element_sets": {"2.A": "Skills", "2.C": "Knowledge", "1.A": "Abilities", "1.C": "Work Styles"},
        "labels": (
            "Round-robin over SOC major groups: each group contributes its most automatable remaining "
            "occupation (p >= 0.6) to the automated class and its least automatable (p <= 0.4) to the "
            "non-automated class until each class holds 56; declining-list occupations are never labeled."
            if args.labels == "balanced" else
            "56 highest and 56 lowest automation probabilities, at most 9 occupations per SOC major "
            "group and class; declining-list occupations are never labeled."
        ),
        "parameters": {"labels": args.labels, "text_signal": args.text_signal, "link_signal": args.link_signal},
        "counts": {
            "occupation_rows": len(occ_rows),
            "occupations": TARGET_OCCUPATIONS,
            "skills": TARGET_SKILLS,
            "edges": TARGET_EDGES,
            "task_statements": len(tasks),
            "labels": len(label_rows),
            "labels_automated": len(automated),
            "labels_non_automated": len(non_automated),
            "declining": len(DECLINING),
            "excluded_occupations": len(extra),
        },
        "sha256": {f: sha256(os.path.join(out, f)) for f in files},
    }
    with open(os.path.join(out, "MANIFEST.json"), "w", encoding="utf-8") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
        f.write("\n")
    print(json.dumps(manifest["counts"], sort_keys=True))


if __name__ == "__main__":
    main()
